#include "pdsys/spectral_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "pdsys/error.hpp"
#include "pdsys/matrix_exp.hpp"
#include "pdsys/parallel.hpp"

namespace pdsys {
namespace {

void require_layout(const SymbolicSystem& system, const SpectralField& field) {
  if (field.d != system.d || field.n_comp != system.n()) {
    throw Error(ErrorCode::kShapeMismatch, "field layout does not match the system");
  }
}

// Symbol blocks at ξ itself (not at ω), so no division by ρ is needed.
struct ModeBlocks {
  Mat s21;  // n2×n1
  Mat s22;  // n2×n2
  Eigen::PartialPivLU<Mat> z_lu;
};

ModeBlocks mode_blocks(const FrozenCoefficients& c, const Vec& xi) {
  const int n = c.n();
  Mat s = Mat::Zero(n, n);
  Mat z = Mat::Zero(c.n2, c.n2);
  for (int a = 0; a < c.d; ++a) {
    s += xi(a) * c.s_alpha[a];
    for (int b = 0; b < c.d; ++b) z += xi(a) * xi(b) * c.y[a][b].bottomRightCorner(c.n2, c.n2);
  }
  ModeBlocks blocks{s.bottomLeftCorner(c.n2, c.n1), s.bottomRightCorner(c.n2, c.n2),
                    Eigen::PartialPivLU<Mat>(z)};
  if (!(blocks.z_lu.rcond() > 1e-13)) {
    throw Error(ErrorCode::kSingularZ, "Z(xi) is not invertible");
  }
  return blocks;
}

// Ŵ = G V̂ with G = [iZ⁻¹S₂₁, iZ⁻¹S₂₂ + I] at ξ ≠ 0 and G = [0, I] at ξ = 0.
CMat parabolic_multiplier(const FrozenCoefficients& c, const Vec& xi) {
  CMat g = CMat::Zero(c.n2, c.n());
  g.rightCols(c.n2).setIdentity();
  if (xi.norm() == 0.0) return g;
  const ModeBlocks blocks = mode_blocks(c, xi);
  g.leftCols(c.n1) = kI * blocks.z_lu.solve(blocks.s21).cast<Complex>();
  g.rightCols(c.n2) += kI * blocks.z_lu.solve(blocks.s22).cast<Complex>();
  return g;
}

bool is_zero(const CVec& v) { return (v.array() == Complex(0.0)).all(); }

double box_measure(const SpectralField& f) {
  return std::pow(2.0 * std::numbers::pi * f.box_length, f.d);
}

// Per-mode data of the block functionals.
struct ModeFunctional {
  double rho = 0.0;
  double residual_weight = 0.0;  // χ(2^{−j_min}ρ)²
  std::vector<std::pair<int, double>> blocks;  // (j, φ(2^{−j}ρ)²)
  CMat h_low;      // L_{ρ,ω}
  CMat s11;        // S̄⁰₁₁
  CMat i_red;      // interaction matrix of the hyperbolic block
  CMat w_map;      // Ŵ = w_map·V̂
};

}  // namespace

CMat mode_generator(const FrozenCoefficients& coeffs, const Vec& xi) {
  const int n = coeffs.n();
  CMat sym = CMat::Zero(n, n);
  for (int a = 0; a < coeffs.d; ++a) {
    sym += kI * xi(a) * coeffs.s_alpha[a].cast<Complex>();
    for (int b = 0; b < coeffs.d; ++b) sym += (xi(a) * xi(b) * coeffs.y[a][b]).cast<Complex>();
  }
  Eigen::PartialPivLU<Mat> s0_lu(coeffs.s0);
  if (!(s0_lu.rcond() > 1e-14)) throw Error(ErrorCode::kSingularS0, "S0 is singular");
  return s0_lu.inverse().cast<Complex>() * sym;
}

Trajectory evolve_linear(const SymbolicSystem& system, const SpectralField& field0,
                         const std::vector<double>& times) {
  validate_shape(system);
  require_layout(system, field0);
  for (double t : times) {
    if (!(t >= 0.0)) throw Error(ErrorCode::kParameterViolation, "times must be nonnegative");
  }
  const FrozenCoefficients coeffs = freeze(system);
  Trajectory out;
  out.times = times;
  out.fields.assign(times.size(), SpectralField::zeros_like(field0));
  const std::size_t modes = field0.modes();
  parallel_for(modes, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      if (field0.real && field0.mirror(m) < m) continue;
      const CVec v0 = field0.mode_vector(m);
      if (is_zero(v0)) continue;
      const Propagator prop(mode_generator(coeffs, field0.frequency(m)));
      for (std::size_t t = 0; t < times.size(); ++t) {
        out.fields[t].set_mode_vector(m, prop.apply(times[t], v0));
      }
    }
  });
  if (field0.real) {
    parallel_for(modes, [&](std::size_t begin, std::size_t end) {
      for (std::size_t m = begin; m < end; ++m) {
        const std::size_t mm = field0.mirror(m);
        if (mm >= m) continue;
        for (auto& f : out.fields) f.set_mode_vector(m, f.mode_vector(mm).conjugate());
      }
    });
  }
  return out;
}

SpectralField parabolic_mode_field(const SymbolicSystem& system, const SpectralField& field) {
  validate_shape(system);
  require_layout(system, field);
  const FrozenCoefficients coeffs = freeze(system);
  SpectralField w = SpectralField::zeros_like(field, system.n2);
  parallel_for(field.modes(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const CVec v = field.mode_vector(m);
      if (is_zero(v)) continue;
      w.set_mode_vector(m, parabolic_multiplier(coeffs, field.frequency(m)) * v);
    }
  });
  return w;
}

double parabolic_multiplier_bound(const SymbolicSystem& system, int sphere_count) {
  double bound = 0.0;
  for (const Vec& omega : sample_sphere(system.d, sphere_count)) {
    const FrequencySymbol sym = evaluate_symbols(system, omega);
    Mat block(sym.n2, sym.n());
    block << sym.s21, sym.s22;
    const Mat op = sym.z_omega.partialPivLu().solve(block);
    bound = std::max(bound, Eigen::JacobiSVD<Mat>(op).singularValues()(0));
  }
  return bound;
}

ResidualSeries parabolic_residual(const SymbolicSystem& system, const Trajectory& trajectory) {
  validate_shape(system);
  const FrozenCoefficients coeffs = freeze(system);
  const int n1 = system.n1;
  const int n2 = system.n2;
  const CMat s0_22 = coeffs.s0.bottomRightCorner(n2, n2).cast<Complex>();
  ResidualSeries out;
  out.times = trajectory.times;
  out.max_abs.assign(trajectory.fields.size(), 0.0);
  parallel_for(trajectory.fields.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const SpectralField& f = trajectory.fields[t];
      require_layout(system, f);
      double worst = 0.0;
      for (std::size_t m = 0; m < f.modes(); ++m) {
        const CVec v = f.mode_vector(m);
        const Vec xi = f.frequency(m);
        if (is_zero(v) || xi.norm() == 0.0) continue;
        const ModeBlocks blocks = mode_blocks(coeffs, xi);
        const CVec dv = -mode_generator(coeffs, xi) * v;
        const auto coupling = [&](const CVec& u) -> CVec {
          return blocks.s21.cast<Complex>() * u.head(n1) + blocks.s22.cast<Complex>() * u.tail(n2);
        };
        const auto z_solve = [&](const CVec& u) -> CVec {
          return blocks.z_lu.solve(u.real()).cast<Complex>() +
                 kI * blocks.z_lu.solve(u.imag()).cast<Complex>();
        };
        const CVec w = kI * z_solve(coupling(v)) + v.tail(n2);
        const CVec forcing = kI * z_solve(coupling(dv));
        const CVec dw = forcing + dv.tail(n2);
        const Mat z = blocks.z_lu.reconstructedMatrix();
        const CVec r = s0_22 * dw + z.cast<Complex>() * w - s0_22 * forcing;
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
      out.max_abs[t] = worst;
    }
  });
  for (double r : out.max_abs) out.max_overall = std::max(out.max_overall, r);
  return out;
}

FunctionalParams certify_functional_params(const SymbolicSystem& system,
                                           const std::vector<double>& rho_grid,
                                           int sphere_count) {
  std::vector<GeneratorSymbol> full, reduced;
  for (const Vec& omega : sample_sphere(system.d, sphere_count)) {
    const FrequencySymbol sym = evaluate_symbols(system, omega);
    full.push_back(full_generator(sym));
    if (system.n1 > 0) reduced.push_back(reduced_generator(sym));
  }
  FunctionalParams params;
  params.full = select_epsilons(full, 0.0, rho_grid);
  if (system.n1 > 0) {
    params.reduced = select_epsilons(reduced, 0.0, rho_grid);
  } else {
    params.reduced.a = 1;
    params.reduced.b = 0;
    params.reduced.epsilons = {1.0};
    params.reduced.certified = true;
  }
  return params;
}

std::vector<FunctionalRow> functional_time_series(const SymbolicSystem& system,
                                                  const Trajectory& trajectory,
                                                  const FunctionalParams& params,
                                                  const FunctionalOptions& options) {
  validate_shape(system);
  std::vector<FunctionalRow> rows(trajectory.fields.size());
  if (trajectory.fields.empty()) return rows;
  const SpectralField& first = trajectory.fields.front();
  require_layout(system, first);
  const FrozenCoefficients coeffs = freeze(system);
  const int n1 = system.n1;
  const int n2 = system.n2;
  const int d = system.d;
  const int jlo = j_min(first.box_length);
  const int jhi = j_max(first);
  const int split = options.split_j;
  const double measure = box_measure(first);

  std::vector<ModeFunctional> data(first.modes());
  parallel_for(first.modes(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      ModeFunctional& md = data[m];
      const Vec xi = first.frequency(m);
      md.rho = xi.norm();
      const double chi = cutoff_chi(md.rho * std::ldexp(1.0, -jlo));
      md.residual_weight = chi * chi;
      if (md.rho == 0.0) continue;
      bool low = false, high = false;
      for (int j = jlo; j <= jhi; ++j) {
        const double phi = cutoff_phi(md.rho * std::ldexp(1.0, -j));
        if (phi <= 0.0) continue;
        md.blocks.emplace_back(j, phi * phi);
        (j <= split ? low : high) = true;
      }
      if (!low && !high) continue;
      const FrequencySymbol sym = evaluate_symbols(coeffs, xi / md.rho);
      if (low) md.h_low = lyapunov_matrix(full_generator(sym), md.rho, params.full);
      if (high) {
        if (n1 > 0) {
          const GeneratorSymbol g = reduced_generator(sym);
          md.s11 = g.s;
          md.i_red = interaction_matrix(g, params.reduced);
        }
        md.w_map = parabolic_multiplier(coeffs, xi);
      }
    }
  });

  const int nblocks = jhi - jlo + 1;
  const CMat s0_22 = coeffs.s0.bottomRightCorner(n2, n2).cast<Complex>();
  const auto quad = [](const CVec& v, const CMat& h) {
    return std::max(0.0, (v.adjoint() * h * v)(0, 0).real());
  };
  parallel_for(rows.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const SpectralField& f = trajectory.fields[t];
      require_same_layout(first, f);
      std::vector<double> l_low(nblocks, 0.0), v_low(nblocks, 0.0), l_high(nblocks, 0.0),
          v1(nblocks, 0.0), v2(nblocks, 0.0), w_plain(nblocks, 0.0), w_energy(nblocks, 0.0);
      double residual = 0.0;
      for (std::size_t m = 0; m < f.modes(); ++m) {
        const ModeFunctional& md = data[m];
        const CVec v = f.mode_vector(m);
        if (is_zero(v)) continue;
        const double v2n = v.squaredNorm();
        residual += md.residual_weight * v2n;
        CVec w;
        if (md.w_map.size() > 0) w = md.w_map * v;
        for (const auto& [j, weight] : md.blocks) {
          const std::size_t b = static_cast<std::size_t>(j - jlo);
          if (j <= split) {
            l_low[b] += weight * quad(v, md.h_low);
            v_low[b] += weight * v2n;
          } else {
            if (n1 > 0) {
              const CVec u = v.head(n1);
              const double damp = std::min(std::ldexp(1.0, j), std::ldexp(1.0, -j));
              l_high[b] += weight * quad(u, md.s11 + damp * md.i_red);
              v1[b] += weight * u.squaredNorm();
            }
            v2[b] += weight * v.tail(n2).squaredNorm();
            w_plain[b] += weight * w.squaredNorm();
            w_energy[b] += weight * quad(w, s0_22);
          }
        }
      }
      FunctionalRow& row = rows[t];
      row.time = trajectory.times[t];
      row.residual = std::sqrt(measure * residual);
      for (int b = 0; b < nblocks; ++b) {
        const int j = jlo + b;
        const auto norm = [&](double sq) { return std::sqrt(measure * sq); };
        if (j <= split) {
          const double lowpow = std::pow(2.0, j * (0.5 * d - 1.0));
          row.low_v += lowpow * norm(v_low[b]);
          row.low_decay += std::pow(2.0, j * options.decay_s) * norm(v_low[b]);
          row.functional += lowpow * norm(l_low[b]);
        } else {
          const double p1 = std::pow(2.0, j * (0.5 * d + 1.0));
          const double p0 = std::pow(2.0, j * 0.5 * d);
          row.high_v1 += p1 * norm(v1[b]);
          row.high_v2 += p0 * norm(v2[b]);
          row.high_w += p0 * norm(w_plain[b]);
          row.functional += p1 * norm(l_high[b]) + p0 * norm(w_energy[b]);
        }
      }
    }
  });
  return rows;
}

DecayFit fit_decay_exponent(const std::vector<double>& times,
                            const std::vector<double>& values, double t_lo, double t_hi) {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::kShapeMismatch, "times and values differ in length");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi || !(times[i] > 0.0)) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorCode::kDegenerateWindow, "non-positive value inside the fit window");
    }
    x.push_back(std::log(times[i]));
    y.push_back(std::log(values[i]));
  }
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::kDegenerateWindow, "fewer than two points in the fit window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::kDegenerateWindow, "all fit times coincide");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.points = static_cast<int>(n);
  if (n > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - my - fit.exponent * (x[i] - mx);
      ssr += r * r;
    }
    fit.standard_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

double low_frequency_diffusivity(const SymbolicSystem& system, int sphere_count) {
  constexpr double kRho = 1e-3;
  double d_min = std::numeric_limits<double>::infinity();
  for (const Vec& omega : sample_sphere(system.d, sphere_count)) {
    d_min = std::min(d_min, spectral_decay_rate(system, omega, kRho) / (kRho * kRho));
  }
  return d_min;
}

double decay_fit_horizon(const SymbolicSystem& system, double box_length) {
  const double d_min = low_frequency_diffusivity(system);
  if (!(d_min > 0.0)) {
    throw Error(ErrorCode::kHypothesisViolation, "no low-frequency diffusion");
  }
  const double length = box_length / 16.0;
  return length * length / d_min;
}

}  // namespace pdsys
