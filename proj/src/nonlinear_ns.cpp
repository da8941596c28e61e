#include "pdsys/nonlinear_ns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdsys/error.hpp"
#include "pdsys/fft.hpp"
#include "pdsys/littlewood_paley.hpp"

namespace pdsys {
namespace {

using Buffer = std::vector<Complex>;

class Stepper {
 public:
  Stepper(const NsParams& p, const SpectralField& layout, const NonlinearOptions& o)
      : p_(p), opt_(o), layout_(SpectralField::zeros_like(layout)), modes_(layout.modes()) {
    xi_.reserve(modes_);
    keep_.reserve(modes_);
    for (std::size_t m = 0; m < modes_; ++m) {
      xi_.push_back(layout.frequency(m));
      const std::vector<int> k = layout.wavevector(m);
      bool keep = true;
      for (int a = 0; a < p.d; ++a) keep = keep && 3 * std::abs(k[a]) < layout.grid[a];
      keep_.push_back(keep);
    }
    dx_ = 2.0 * std::numbers::pi * layout.box_length / *std::max_element(layout.grid.begin(), layout.grid.end());
  }

  void step(SpectralField& s, double dt) const {
    const double gamma = 1.0 - 1.0 / std::numbers::sqrt2;
    const double delta = 1.0 - 1.0 / (2.0 * gamma);
    const SpectralField f0 = explicit_rhs(s, dt);
    SpectralField u1 = s;
    axpy(u1, gamma * dt, f0);
    implicit_solve(u1, gamma * dt);
    const SpectralField f1 = explicit_rhs(u1, dt);
    const SpectralField l1 = viscous(u1);
    SpectralField u2 = s;
    axpy(u2, dt * delta, f0);
    axpy(u2, dt * (1.0 - delta), f1);
    axpy(u2, dt * (1.0 - gamma), l1);
    implicit_solve(u2, gamma * dt);
    s = std::move(u2);
  }

  void dealias(SpectralField& s) const {
    for (int c = 0; c < s.n_comp; ++c) {
      for (std::size_t m = 0; m < modes_; ++m) {
        if (!keep_[m]) s.at(c, m) = 0.0;
      }
    }
  }

 private:
  static void axpy(SpectralField& y, double a, const SpectralField& x) {
    for (std::size_t i = 0; i < y.coeffs.size(); ++i) y.coeffs[i] += a * x.coeffs[i];
  }

  Buffer physical(const Buffer& spectral) const {
    Buffer b = spectral;
    fft_inplace(b, layout_.grid, +1);
    for (Complex& z : b) z = z.real();
    return b;
  }

  void to_spectral(Buffer& b) const {
    fft_inplace(b, layout_.grid, -1);
    const double scale = 1.0 / static_cast<double>(modes_);
    for (std::size_t m = 0; m < modes_; ++m) b[m] = keep_[m] ? b[m] * scale : Complex(0.0);
  }

  Buffer component(const SpectralField& s, int c) const {
    return Buffer(s.component(c), s.component(c) + modes_);
  }

  Buffer derivative(const Buffer& spectral, int axis) const {
    Buffer b(modes_);
    for (std::size_t m = 0; m < modes_; ++m) b[m] = kI * xi_[m](axis) * spectral[m];
    return b;
  }

  // (μΔu + (μ+λ)∇div u)/ρ̄ in Fourier variables; zero density row.
  SpectralField viscous(const SpectralField& s) const {
    SpectralField out = SpectralField::zeros_like(s);
    const int d = p_.d;
    for (std::size_t m = 0; m < modes_; ++m) {
      const Vec& xi = xi_[m];
      Complex div = 0.0;
      for (int a = 0; a < d; ++a) div += xi(a) * s.at(1 + a, m);
      for (int i = 0; i < d; ++i) {
        out.at(1 + i, m) =
            -(p_.mu * xi.squaredNorm() * s.at(1 + i, m) + (p_.mu + p_.lambda) * xi(i) * div) / p_.rho_ref;
      }
    }
    return out;
  }

  // u ← (I − cL)⁻¹u with L the frozen viscous operator, split along and across ξ.
  void implicit_solve(SpectralField& s, double c) const {
    const int d = p_.d;
    const double nu = 2.0 * p_.mu + p_.lambda;
    for (std::size_t m = 0; m < modes_; ++m) {
      const Vec& xi = xi_[m];
      const double r2 = xi.squaredNorm();
      if (r2 == 0.0) continue;
      CVec u(d);
      for (int i = 0; i < d; ++i) u(i) = s.at(1 + i, m);
      const Complex along = xi.cast<Complex>().dot(u) / r2;
      const CVec par = along * xi.cast<Complex>();
      const CVec perp = u - par;
      const CVec out = perp / (1.0 + c * p_.mu * r2 / p_.rho_ref) +
                       par / (1.0 + c * nu * r2 / p_.rho_ref);
      for (int i = 0; i < d; ++i) s.at(1 + i, m) = out(i);
    }
  }

  SpectralField explicit_rhs(const SpectralField& s, double dt) const {
    const int d = p_.d;
    const Buffer a_hat = component(s, 0);
    const Buffer a = physical(a_hat);
    std::vector<Buffer> u(d), grad_a(d), vis(d);
    std::vector<std::vector<Buffer>> grad_u(d, std::vector<Buffer>(d));
    const SpectralField visc = viscous(s);
    for (int i = 0; i < d; ++i) {
      const Buffer ui = component(s, 1 + i);
      u[i] = physical(ui);
      grad_a[i] = physical(derivative(a_hat, i));
      vis[i] = physical(component(visc, 1 + i));
      for (int b = 0; b < d; ++b) grad_u[i][b] = physical(derivative(ui, b));
    }
    double speed = 0.0;
    std::vector<Buffer> flux(d, Buffer(modes_));
    std::vector<Buffer> force(d, Buffer(modes_));
    for (std::size_t x = 0; x < modes_; ++x) {
      const double rho = p_.rho_ref + a[x].real();
      if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw Error(ErrorCode::kBlowupDetected, "density left the admissible range");
      }
      const double dp = p_.pressure.dp(rho);
      double umag = 0.0;
      for (int i = 0; i < d; ++i) umag += std::norm(u[i][x]);
      speed = std::max(speed, std::sqrt(umag) + std::sqrt(std::max(dp, 0.0)));
      for (int i = 0; i < d; ++i) {
        flux[i][x] = rho * u[i][x];
        Complex adv = 0.0;
        for (int b = 0; b < d; ++b) adv += u[b][x] * grad_u[i][b][x];
        force[i][x] = -adv - dp / rho * grad_a[i][x] + (1.0 / rho - 1.0 / p_.rho_ref) * vis[i][x];
      }
    }
    if (speed * dt / dx_ > opt_.cfl_max) {
      throw Error(ErrorCode::kCflViolation,
                  "CFL number " + std::to_string(speed * dt / dx_) + " exceeds " +
                      std::to_string(opt_.cfl_max));
    }
    SpectralField out = SpectralField::zeros_like(s);
    for (int i = 0; i < d; ++i) {
      to_spectral(flux[i]);
      to_spectral(force[i]);
      for (std::size_t m = 0; m < modes_; ++m) {
        out.at(0, m) -= kI * xi_[m](i) * flux[i][m];
        out.at(1 + i, m) = force[i][m];
      }
    }
    return out;
  }

  NsParams p_;
  NonlinearOptions opt_;
  SpectralField layout_;
  std::size_t modes_;
  std::vector<Vec> xi_;
  std::vector<bool> keep_;
  double dx_ = 1.0;
};

}  // namespace

SymbolicSystem linearized_ns(const NsParams& params) {
  return make_barotropic_ns(params.d, params.mu, params.lambda, params.pressure, params.rho_ref);
}

NonlinearResult evolve_nonlinear_ns(const NsParams& params, const SpectralField& field0,
                                    const std::vector<double>& times,
                                    const NonlinearOptions& options,
                                    const std::optional<FunctionalParams>& weights) {
  if (params.d != 1 && params.d != 2) {
    throw Error(ErrorCode::kParameterViolation, "the nonlinear solver supports d = 1 and d = 2");
  }
  const SymbolicSystem system = linearized_ns(params);
  if (field0.d != params.d || field0.n_comp != params.d + 1 || !field0.real) {
    throw Error(ErrorCode::kShapeMismatch, "initial data must be a real (1 + d)-component field");
  }
  if (!(options.dt > 0.0)) throw Error(ErrorCode::kParameterViolation, "dt must be positive");
  const double size =
      besov_norm_hybrid(field0, 0.5 * params.d - 1.0, 0.5 * params.d + 1.0, BesovSum::kSum,
                        options.split_j).total;
  if (size > options.small_data) {
    throw Error(ErrorCode::kParameterViolation,
                "initial data exceed the small-data threshold (" + std::to_string(size) + ")");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorCode::kParameterViolation, "times must be nonnegative and nondecreasing");
    }
  }

  const Stepper stepper(params, field0, options);
  SpectralField state = field0;
  stepper.dealias(state);
  const double norm0 = state.l2_norm();
  NonlinearResult result;
  double t = 0.0;
  for (double target : times) {
    while (t < target) {
      const double dt = std::min(options.dt, target - t);
      stepper.step(state, dt);
      t = target - t <= options.dt ? target : t + dt;
      ++result.steps;
      const double norm = state.l2_norm();
      if (!std::isfinite(norm) || norm > options.blowup_factor * norm0) {
        throw Error(ErrorCode::kBlowupDetected, "perturbation norm grew beyond the blowup bound");
      }
    }
    result.trajectory.times.push_back(target);
    result.trajectory.fields.push_back(state);
  }

  const FunctionalParams fp =
      weights ? *weights : certify_functional_params(system, default_rho_grid());
  FunctionalOptions fo;
  fo.split_j = options.split_j;
  result.functional = functional_time_series(system, result.trajectory, fp, fo);
  result.bounded = true;
  if (!result.functional.empty()) {
    const double bound = options.bound_factor * result.functional.front().functional;
    for (const auto& row : result.functional) result.bounded = result.bounded && row.functional <= bound;
  }
  return result;
}

}  // namespace pdsys
