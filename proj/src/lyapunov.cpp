#include "pdsys/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pdsys/error.hpp"
#include "pdsys/sk.hpp"

namespace pdsys {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CMat herm(const CMat& a) { return 0.5 * (a + a.adjoint()); }

Vec hermitian_eigenvalues(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(a), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "Hermitian eigen solver failed");
  }
  return es.eigenvalues();
}

void require_rho(double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::kNonPositiveRho, "rho must be positive");
}

// Quantities of one generator that do not depend on ρ or the weights.
struct GeneratorCache {
  const GeneratorSymbol* g = nullptr;
  CMat s;
  std::vector<CMat> hk;  // ½(P_k*Q_k + Q_k*P_k), k = 1 … n−1
  std::vector<CMat> qk;  // Q_k = 𝓜𝓝^k
  CMat range_basis;      // eigenvectors of 𝓜*𝓜 with nonzero eigenvalue
  CMat kernel_basis;
  Vec range_eigs;
};

// Quantities at one (generator, ρ) pair, linear in the weights.
struct PointCache {
  int gen = 0;
  double rho = 0.0;
  double weight = 0.0;
  double scale = 0.0;      // min(ρᵇ/κ, κρ^{2a−b})
  double interaction_scale = 0.0;  // max(ρᵃ, ρ^{2b−a}/κ²)
  CMat d0;                 // SK + K*S
  std::vector<CMat> dk;    // H_k K + K* H_k
  std::vector<CMat> pk;    // −(H_k K + K* H_k) + ½ρᵃ Q_k*Q_k
};

GeneratorCache build_generator_cache(const GeneratorSymbol& g, double kappa) {
  GeneratorCache c;
  c.g = &g;
  const Eigen::Index n = g.size();
  c.s = herm(g.s);
  const CMat mm = kappa * g.m;
  CMat p = mm;
  for (Eigen::Index k = 1; k < n; ++k) {
    const CMat q = p * g.n;
    c.hk.push_back(0.5 * (p.adjoint() * q + q.adjoint() * p));
    c.qk.push_back(q);
    p = q;
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(mm.adjoint() * mm));
  const Vec& ev = es.eigenvalues();
  const double top = ev.size() ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  std::vector<Eigen::Index> ker, ran;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    (ev(i) > 1e-12 * top && top > 0.0 ? ran : ker).push_back(i);
  }
  c.range_basis.resize(n, static_cast<Eigen::Index>(ran.size()));
  c.range_eigs.resize(static_cast<Eigen::Index>(ran.size()));
  for (std::size_t j = 0; j < ran.size(); ++j) {
    c.range_basis.col(j) = es.eigenvectors().col(ran[j]);
    c.range_eigs(j) = ev(ran[j]);
  }
  c.kernel_basis.resize(n, static_cast<Eigen::Index>(ker.size()));
  for (std::size_t j = 0; j < ker.size(); ++j) c.kernel_basis.col(j) = es.eigenvectors().col(ker[j]);
  return c;
}

PointCache build_point_cache(const GeneratorCache& gc, int gen, double rho,
                             double kappa) {
  const GeneratorSymbol& g = *gc.g;
  PointCache p;
  p.gen = gen;
  p.rho = rho;
  p.weight = functional_weight(rho, g.a, g.b, kappa);
  p.scale = dissipation_rate_scale(rho, g.a, g.b, kappa);
  p.interaction_scale = std::max(std::pow(rho, g.a),
                                 std::pow(rho, 2 * g.b - g.a) / (kappa * kappa));
  const CMat k = generator_matrix(g, rho);
  p.d0 = herm(gc.s * k + k.adjoint() * gc.s);
  const double rho_a = std::pow(rho, g.a);
  for (std::size_t i = 0; i < gc.hk.size(); ++i) {
    const CMat d = herm(gc.hk[i] * k + k.adjoint() * gc.hk[i]);
    p.dk.push_back(d);
    p.pk.push_back(herm(-d + 0.5 * rho_a * gc.qk[i].adjoint() * gc.qk[i]));
  }
  return p;
}

// Smallest t with P ⪯ t·R where R = U₁ΛU₁*; infinite when P is not negative
// definite on ker R.
double minimal_bound(const CMat& p, const GeneratorCache& gc) {
  const CMat& u0 = gc.kernel_basis;
  const CMat& u1 = gc.range_basis;
  const double pscale = std::max(p.cwiseAbs().maxCoeff(), 1e-300);
  CMat reduced = u1.adjoint() * p * u1;
  if (u0.cols() > 0) {
    const CMat p00 = herm(u0.adjoint() * p * u0);
    const Vec ev0 = hermitian_eigenvalues(p00);
    if (!(ev0.maxCoeff() < -1e-13 * pscale)) return kInf;
    const CMat p10 = u1.adjoint() * p * u0;
    reduced += p10 * (-p00).ldlt().solve(p10.adjoint());
  }
  if (u1.cols() == 0) return 0.0;
  const Vec inv_sqrt = gc.range_eigs.cwiseSqrt().cwiseInverse();
  const CMat scaled = inv_sqrt.asDiagonal() * reduced * inv_sqrt.asDiagonal();
  return std::max(0.0, hermitian_eigenvalues(scaled).maxCoeff());
}

struct Evaluation {
  Certification cert;
  double min_ratio = kInf;
};

Evaluation evaluate(const std::vector<GeneratorCache>& gens,
                    const std::vector<PointCache>& points,
                    const std::vector<double>& eps) {
  Evaluation out;
  Certification& cert = out.cert;
  cert.ok = true;
  double big_c = 1.0;
  double inter = 0.0;
  for (const PointCache& pt : points) {
    const GeneratorCache& gc = gens[pt.gen];
    CMat h = gc.s;
    CMat d = pt.d0;
    CMat p = CMat::Zero(h.rows(), h.cols());
    for (std::size_t k = 0; k < gc.hk.size(); ++k) {
      h += pt.weight * eps[k + 1] * gc.hk[k];
      d += pt.weight * eps[k + 1] * pt.dk[k];
      p += eps[k + 1] * pt.pk[k];
    }
    const Vec eh = hermitian_eigenvalues(h);
    const double hmin = eh.minCoeff();
    const double hmax = eh.maxCoeff();
    if (!(hmin > 0.0)) {
      std::ostringstream msg;
      msg << "functional not positive at rho = " << pt.rho;
      cert.ok = false;
      cert.failure = msg.str();
      cert.worst_rho = pt.rho;
      return out;
    }
    big_c = std::max({big_c, hmax, 1.0 / hmin});
    const double dmin = hermitian_eigenvalues(d).minCoeff();
    const double ratio = dmin / (hmax * pt.scale);
    if (ratio < out.min_ratio) {
      out.min_ratio = ratio;
      cert.worst_rho = pt.rho;
    }
    if (!gc.hk.empty()) {
      const double t = minimal_bound(p, gc);
      if (!std::isfinite(t)) {
        std::ostringstream msg;
        msg << "interaction bound fails at rho = " << pt.rho;
        cert.ok = false;
        cert.failure = msg.str();
        cert.worst_rho = pt.rho;
        return out;
      }
      inter = std::max(inter, t / (eps[0] * pt.interaction_scale));
    }
  }
  if (!(out.min_ratio > 0.0)) {
    std::ostringstream msg;
    msg << "dissipation not coercive at rho = " << cert.worst_rho;
    cert.ok = false;
    cert.failure = msg.str();
    return out;
  }
  // Slack so that re-evaluating the same inequalities never fails on rounding.
  cert.dissipation_c = out.min_ratio * (1.0 - 1e-9);
  cert.equivalence_C = big_c * (1.0 + 1e-9);
  cert.interaction_C = inter * (1.0 + 1e-9);
  return out;
}

struct Workspace {
  std::vector<GeneratorCache> gens;
  std::vector<PointCache> points;
};

Workspace build_workspace(const std::vector<GeneratorSymbol>& gens, double kappa,
                          const std::vector<double>& rho_grid) {
  Workspace ws;
  ws.gens.reserve(gens.size());
  for (const auto& g : gens) ws.gens.push_back(build_generator_cache(g, kappa));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (double rho : rho_grid) {
      require_rho(rho);
      ws.points.push_back(build_point_cache(ws.gens[i], static_cast<int>(i), rho, kappa));
    }
  }
  return ws;
}

std::vector<double> geometric_weights(Eigen::Index n, double eps0, double delta) {
  std::vector<double> eps(static_cast<std::size_t>(std::max<Eigen::Index>(n, 1)));
  double v = eps0;
  for (auto& e : eps) {
    e = v;
    v *= delta;
  }
  return eps;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                 double* intercept = nullptr) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

}  // namespace

GeneratorSymbol full_generator(const FrequencySymbol& sym) {
  GeneratorSymbol g;
  g.s = sym.s0.cast<Complex>();
  g.n = sym.n_omega;
  g.m = sym.m_omega;
  g.a = 1;
  g.b = 2;
  return g;
}

GeneratorSymbol reduced_generator(const FrequencySymbol& sym) {
  GeneratorSymbol g;
  g.s = sym.s0_11().cast<Complex>();
  g.n = sym.nred;
  g.m = sym.mred;
  g.a = 1;
  g.b = 0;
  return g;
}

CMat generator_matrix(const GeneratorSymbol& g, double rho) {
  return std::pow(rho, g.a) * g.n + std::pow(rho, g.b) * g.m;
}

double admissible_kappa(const GeneratorSymbol& g) {
  const CMat b = g.s * g.m;
  const CMat hb = herm(b);
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(b.adjoint() * b));
  const Vec& ev = es.eigenvalues();
  if (ev.size() == 0 || ev.maxCoeff() <= 0.0) return kInf;
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> ker, ran;
  for (Eigen::Index i = 0; i < ev.size(); ++i) (ev(i) > 1e-12 * top ? ran : ker).push_back(i);
  CMat u1(b.rows(), static_cast<Eigen::Index>(ran.size()));
  Vec lam(static_cast<Eigen::Index>(ran.size()));
  for (std::size_t j = 0; j < ran.size(); ++j) {
    u1.col(j) = es.eigenvectors().col(ran[j]);
    lam(j) = ev(ran[j]);
  }
  if (!ker.empty()) {
    CMat u0(b.rows(), static_cast<Eigen::Index>(ker.size()));
    for (std::size_t j = 0; j < ker.size(); ++j) u0.col(j) = es.eigenvectors().col(ker[j]);
    const double coupling = (u1.adjoint() * hb * u0).cwiseAbs().maxCoeff();
    if (coupling > 1e-12 * std::max(1.0, hb.cwiseAbs().maxCoeff())) return 0.0;
  }
  const Vec inv_sqrt = lam.cwiseSqrt().cwiseInverse();
  const CMat scaled = inv_sqrt.asDiagonal() * (u1.adjoint() * hb * u1) * inv_sqrt.asDiagonal();
  return std::max(0.0, hermitian_eigenvalues(scaled).minCoeff());
}

double functional_weight(double rho, int a, int b, double kappa) {
  const double r = kappa * std::pow(rho, a - b);
  return std::min(1.0 / r, r);
}

double dissipation_rate_scale(double rho, int a, int b, double kappa) {
  return std::min(std::pow(rho, b) / kappa, kappa * std::pow(rho, 2 * a - b));
}

CMat interaction_matrix(const GeneratorSymbol& g, const LyapunovParams& params) {
  const GeneratorCache gc = build_generator_cache(g, params.kappa);
  CMat sum = CMat::Zero(gc.s.rows(), gc.s.cols());
  for (std::size_t k = 0; k < gc.hk.size(); ++k) {
    if (k + 1 < params.epsilons.size()) sum += params.epsilons[k + 1] * gc.hk[k];
  }
  return sum;
}

CMat lyapunov_matrix(const GeneratorSymbol& g, double rho, const LyapunovParams& params) {
  require_rho(rho);
  return herm(g.s) + functional_weight(rho, g.a, g.b, params.kappa) * interaction_matrix(g, params);
}

double lyapunov_value(const CVec& v, double rho, const GeneratorSymbol& g,
                      const LyapunovParams& params) {
  const CMat h = lyapunov_matrix(g, rho, params);
  return std::max(0.0, (v.adjoint() * h * v)(0, 0).real());
}

double lyapunov_value(const CVec& v, double rho, const FrequencySymbol& sym,
                      const LyapunovParams& params) {
  const GeneratorSymbol g = params.b == 0 ? reduced_generator(sym) : full_generator(sym);
  return lyapunov_value(v, rho, g, params);
}

FlowRates lyapunov_derivative_along_flow(double rho, const GeneratorSymbol& g,
                                         const LyapunovParams& params) {
  require_rho(rho);
  const CMat h = lyapunov_matrix(g, rho, params);
  const CMat k = generator_matrix(g, rho);
  const Vec eh = hermitian_eigenvalues(h);
  FlowRates out;
  out.min_eig_h = eh.minCoeff();
  out.max_eig_h = eh.maxCoeff();
  out.min_eig_d = hermitian_eigenvalues(h * k + k.adjoint() * h).minCoeff();
  out.observed_rate = out.min_eig_d / out.max_eig_h;
  out.required_rate =
      params.dissipation_c * dissipation_rate_scale(rho, g.a, g.b, params.kappa);
  return out;
}

double interaction_constant(double rho, const GeneratorSymbol& g,
                            const LyapunovParams& params) {
  require_rho(rho);
  const GeneratorCache gc = build_generator_cache(g, params.kappa);
  if (gc.hk.empty()) return 0.0;
  const PointCache pt = build_point_cache(gc, 0, rho, params.kappa);
  CMat p = CMat::Zero(g.size(), g.size());
  for (std::size_t k = 0; k < pt.pk.size(); ++k) p += params.epsilons.at(k + 1) * pt.pk[k];
  const double t = minimal_bound(p, gc);
  return t / (params.epsilons.at(0) * pt.interaction_scale);
}

Certification certify(const std::vector<GeneratorSymbol>& gens,
                      const LyapunovParams& params,
                      const std::vector<double>& rho_grid) {
  const Workspace ws = build_workspace(gens, params.kappa, rho_grid);
  for (const auto& g : gens) {
    if (static_cast<Eigen::Index>(params.epsilons.size()) < std::max<Eigen::Index>(g.size(), 1)) {
      throw Error(ErrorCode::kShapeMismatch, "need n weights");
    }
  }
  return evaluate(ws.gens, ws.points, params.epsilons).cert;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::kInsufficientGrid, "invalid log grid");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double l0 = std::log10(lo);
  const double l1 = std::log10(hi);
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
  return out;
}

std::vector<double> default_rho_grid() { return log_grid(1e-3, 1e3, 61); }

LyapunovParams select_epsilons(const GeneratorSymbol& g, double kappa,
                               const std::vector<double>& rho_grid) {
  return select_epsilons(std::vector<GeneratorSymbol>{g}, kappa, rho_grid);
}

LyapunovParams select_epsilons(const FrequencySymbol& sym, int a, int b, double kappa,
                               const std::vector<double>& rho_grid) {
  GeneratorSymbol g;
  if (a == 1 && b == 2) {
    g = full_generator(sym);
  } else if (a == 1 && b == 0) {
    g = reduced_generator(sym);
  } else {
    throw Error(ErrorCode::kParameterViolation,
                "symbol data define the (a, b) = (1, 2) and (1, 0) systems only");
  }
  return select_epsilons(g, kappa, rho_grid);
}

LyapunovParams select_epsilons(const std::vector<GeneratorSymbol>& gens, double kappa,
                               const std::vector<double>& rho_grid) {
  if (gens.empty()) throw Error(ErrorCode::kShapeMismatch, "no generators");
  if (rho_grid.empty()) throw Error(ErrorCode::kInsufficientGrid, "empty rho grid");
  const Eigen::Index n = gens.front().size();
  for (const auto& g : gens) {
    if (g.size() != n || g.a != gens.front().a || g.b != gens.front().b) {
      throw Error(ErrorCode::kShapeMismatch, "generators differ in size or order");
    }
    if (!kalman_rank_holds(g.n, g.m).holds) {
      throw Error(ErrorCode::kSkFails, "Kalman rank test fails for a generator");
    }
  }
  if (kappa <= 0.0) {
    kappa = kInf;
    for (const auto& g : gens) kappa = std::min(kappa, admissible_kappa(g));
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw Error(ErrorCode::kParameterViolation, "no admissible diffusion scale");
    }
  }

  LyapunovParams params;
  params.a = gens.front().a;
  params.b = gens.front().b;
  params.kappa = kappa;
  const Workspace ws = build_workspace(gens, kappa, rho_grid);

  std::vector<double> deltas = {1.0};
  if (n > 2) deltas = {1.0, 0.3, 0.1, 0.03, 0.01, 1e-3};

  double best_c = -1.0;
  std::string last_failure = "no candidate weights";
  for (double delta : deltas) {
    auto feasible = [&](double eps0) {
      const Evaluation e = evaluate(ws.gens, ws.points, geometric_weights(n, eps0, delta));
      if (!e.cert.ok) last_failure = e.cert.failure;
      return e.cert.ok;
    };
    double lo = 1.0;
    int halvings = 0;
    while (!feasible(lo) && halvings < 80) {
      lo *= 0.5;
      ++halvings;
    }
    if (halvings == 80) continue;
    if (halvings > 0) {
      double hi = 2.0 * lo;
      for (int it = 0; it < 12; ++it) {
        const double mid = std::sqrt(lo * hi);
        (feasible(mid) ? lo : hi) = mid;
      }
    }
    // The dissipation constant vanishes at the feasibility boundary and scales
    // like ε₀ for small ε₀; scan below the boundary for the best value.
    for (int k = 1; k <= 16; ++k) {
      const double eps0 = lo * std::pow(0.5, k);
      const std::vector<double> eps = geometric_weights(n, eps0, delta);
      const Evaluation e = evaluate(ws.gens, ws.points, eps);
      if (e.cert.ok && e.cert.dissipation_c > best_c) {
        best_c = e.cert.dissipation_c;
        params.epsilons = eps;
        params.dissipation_c = e.cert.dissipation_c;
        params.equivalence_C = e.cert.equivalence_C;
        params.interaction_C = e.cert.interaction_C;
      }
    }
  }
  if (best_c <= 0.0) {
    throw Error(ErrorCode::kNoFeasibleEpsilons, last_failure);
  }
  params.certified = true;
  return params;
}

double spectral_decay_rate(const FrequencySymbol& sym, double rho) {
  require_rho(rho);
  const CMat k = rho * sym.n_omega + rho * rho * sym.m_omega;
  Eigen::ComplexEigenSolver<CMat> es(k, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "eigen solver failed on the mode generator");
  }
  return es.eigenvalues().real().minCoeff();
}

double spectral_decay_rate(const SymbolicSystem& system, const Vec& omega, double rho) {
  return spectral_decay_rate(evaluate_symbols(system, omega), rho);
}

EnvelopeReport rate_envelope_fit(const SymbolicSystem& system, const Vec& omega,
                                 const std::vector<double>& rho_grid) {
  if (rho_grid.size() < 4) throw Error(ErrorCode::kInsufficientGrid, "need at least 4 grid points");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    require_rho(rho_grid[i]);
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
      throw Error(ErrorCode::kInsufficientGrid, "rho grid must be increasing");
    }
  }
  const double lo = rho_grid.front();
  const double hi = rho_grid.back();
  if (std::log10(hi / lo) < 4.0 - 1e-9) {
    throw Error(ErrorCode::kInsufficientGrid, "rho grid must span at least 4 decades");
  }
  const FrequencySymbol sym = evaluate_symbols(system, omega);
  EnvelopeReport rep;
  rep.rho = rho_grid;
  std::vector<double> lx, ly, hx, hy;
  for (double rho : rho_grid) {
    const double r = spectral_decay_rate(sym, rho);
    rep.rate.push_back(r);
    const double lr = r > 0.0 ? std::log(r) : -kInf;
    if (rho <= lo * 10.0 * (1.0 + 1e-12)) {
      lx.push_back(std::log(rho));
      ly.push_back(lr);
    }
    if (rho >= hi / 10.0 * (1.0 - 1e-12)) {
      hx.push_back(std::log(rho));
      hy.push_back(lr);
    }
  }
  if (lx.size() < 2 || hx.size() < 2) {
    throw Error(ErrorCode::kInsufficientGrid, "need two points in each tail decade");
  }
  double intercept = 0.0;
  rep.low_slope = fit_slope(lx, ly, &intercept);
  rep.high_slope = fit_slope(hx, hy);
  rep.plateau = rep.rate.back();
  if (rep.low_slope > 0.0 && rep.plateau > 0.0 && std::isfinite(intercept)) {
    rep.crossover_rho = std::exp((std::log(rep.plateau) - intercept) / rep.low_slope);
  } else {
    rep.crossover_rho = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace pdsys
