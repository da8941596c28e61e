#include "pdsys/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "pdsys/error.hpp"

namespace pdsys {
namespace {

Mat call_checked(const MatrixMap& map, const Vec& state, int n,
                 const char* what) {
  if (!map) throw Error(ErrorCode::kShapeMismatch, std::string(what) + " is not set");
  Mat out = map(state);
  if (out.rows() != n || out.cols() != n) {
    std::ostringstream msg;
    msg << what << " returned " << out.rows() << "x" << out.cols()
        << ", expected " << n << "x" << n;
    throw Error(ErrorCode::kShapeMismatch, msg.str());
  }
  return out;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Mat symmetric_part(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void validate_shape(const SymbolicSystem& system) {
  if (system.d < 1) throw Error(ErrorCode::kShapeMismatch, "dimension d must be >= 1");
  if (system.n1 < 0 || system.n2 < 1) {
    throw Error(ErrorCode::kShapeMismatch, "need n1 >= 0 and n2 >= 1");
  }
  if (system.uref.size() != system.n()) {
    throw Error(ErrorCode::kShapeMismatch, "reference state has wrong length");
  }
  if (static_cast<int>(system.s_alpha.size()) != system.d) {
    throw Error(ErrorCode::kShapeMismatch, "expected d convection matrices");
  }
  if (static_cast<int>(system.y.size()) != system.d) {
    throw Error(ErrorCode::kShapeMismatch, "expected d×d diffusion matrices");
  }
  for (const auto& row : system.y) {
    if (static_cast<int>(row.size()) != system.d) {
      throw Error(ErrorCode::kShapeMismatch, "expected d×d diffusion matrices");
    }
  }
  if (system.domain_check && !system.domain_check(system.uref)) {
    throw Error(ErrorCode::kDomainViolation, "reference state outside the admissible set");
  }
}

FrozenCoefficients freeze_at(const SymbolicSystem& system, const Vec& state) {
  validate_shape(system);
  if (state.size() != system.n()) {
    throw Error(ErrorCode::kShapeMismatch, "state has wrong length");
  }
  const int n = system.n();
  FrozenCoefficients c;
  c.d = system.d;
  c.n1 = system.n1;
  c.n2 = system.n2;
  c.s0 = call_checked(system.s0, state, n, "S0");
  c.s_alpha.reserve(system.d);
  for (int a = 0; a < system.d; ++a) {
    c.s_alpha.push_back(call_checked(system.s_alpha[a], state, n, "S^alpha"));
  }
  c.y.resize(system.d);
  for (int a = 0; a < system.d; ++a) {
    for (int b = 0; b < system.d; ++b) {
      c.y[a].push_back(call_checked(system.y[a][b], state, n, "Y^alpha,beta"));
    }
  }
  return c;
}

FrozenCoefficients freeze(const SymbolicSystem& system) {
  return freeze_at(system, system.uref);
}

FrequencySymbol evaluate_symbols(const SymbolicSystem& system, const Vec& omega) {
  return evaluate_symbols(freeze(system), omega);
}

FrequencySymbol evaluate_symbols(const FrozenCoefficients& c, const Vec& omega) {
  if (omega.size() != c.d) {
    throw Error(ErrorCode::kShapeMismatch, "direction has wrong dimension");
  }
  if (std::abs(omega.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::kNonUnitDirection, "|omega| != 1");
  }
  const int n = c.n();
  const int n1 = c.n1;
  const int n2 = c.n2;

  FrequencySymbol sym;
  sym.omega = omega;
  sym.n1 = n1;
  sym.n2 = n2;
  sym.s0 = c.s0;

  Mat s_omega = Mat::Zero(n, n);
  for (int a = 0; a < c.d; ++a) s_omega += omega(a) * c.s_alpha[a];
  sym.a_omega = kI * s_omega.cast<Complex>();

  sym.b_omega = Mat::Zero(n, n);
  for (int a = 0; a < c.d; ++a) {
    for (int b = 0; b < c.d; ++b) sym.b_omega += omega(a) * omega(b) * c.y[a][b];
  }

  Eigen::PartialPivLU<Mat> s0_lu(c.s0);
  if (!(s0_lu.rcond() > 1e-14)) {
    throw Error(ErrorCode::kSingularS0, "S0 at the reference state is singular");
  }
  const Mat s0_inv = s0_lu.inverse();
  sym.n_omega = s0_inv.cast<Complex>() * sym.a_omega;
  sym.m_omega = (s0_inv * sym.b_omega).cast<Complex>();

  sym.s12 = s_omega.topRightCorner(n1, n2);
  sym.s21 = s_omega.bottomLeftCorner(n2, n1);
  sym.s22 = s_omega.bottomRightCorner(n2, n2);
  sym.z_omega = sym.b_omega.bottomRightCorner(n2, n2);

  Eigen::PartialPivLU<Mat> z_lu(sym.z_omega);
  if (!(z_lu.rcond() > 1e-13)) {
    throw Error(ErrorCode::kSingularZ, "Z(omega) is not invertible");
  }

  if (n1 > 0) {
    const Mat s0_11 = c.s0.topLeftCorner(n1, n1);
    Eigen::PartialPivLU<Mat> s11_lu(s0_11);
    const Mat s11_omega = s_omega.topLeftCorner(n1, n1);
    sym.nred = kI * s11_lu.solve(s11_omega).cast<Complex>();
    sym.mred = s11_lu.solve(sym.s12 * z_lu.solve(sym.s21)).cast<Complex>();
  } else {
    sym.nred = CMat(0, 0);
    sym.mred = CMat(0, 0);
  }
  return sym;
}

std::vector<Vec> sample_sphere(int d, int count) {
  if (d < 1) throw Error(ErrorCode::kShapeMismatch, "dimension must be >= 1");
  std::vector<Vec> out;
  if (d == 1) {
    if (count == 1) {
      out.push_back(Vec::Constant(1, 1.0));
    } else {
      out.push_back(Vec::Constant(1, -1.0));
      out.push_back(Vec::Constant(1, 1.0));
    }
    return out;
  }
  if (count <= 0) count = d == 2 ? 64 : 256;
  out.reserve(count);
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      Vec w(2);
      w << std::cos(t), std::sin(t);
      out.push_back(w);
    }
  } else if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      Vec w(3);
      w << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(w / w.norm());
    }
  } else {
    std::mt19937_64 rng(0x5eedULL + d);
    std::normal_distribution<double> normal;
    for (int k = 0; k < count; ++k) {
      Vec w(d);
      for (int i = 0; i < d; ++i) w(i) = normal(rng);
      out.push_back(w / w.norm());
    }
  }
  return out;
}

std::vector<Vec> perturbation_grid(const SymbolicSystem& system, double rel) {
  const int n = system.n();
  std::vector<Vec> out;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    Vec u = system.uref;
    std::size_t c = code;
    for (int i = 0; i < n; ++i) {
      const int digit = static_cast<int>(c % 3) - 1;
      c /= 3;
      u(i) += digit * rel * std::max(std::abs(system.uref(i)), 1.0);
    }
    if (!system.domain_check || system.domain_check(u)) out.push_back(u);
  }
  return out;
}

double ellipticity_constant(const FrozenCoefficients& c, int sphere_count) {
  double c1 = std::numeric_limits<double>::infinity();
  for (const Vec& xi : sample_sphere(c.d, sphere_count)) {
    Mat z = Mat::Zero(c.n2, c.n2);
    for (int a = 0; a < c.d; ++a) {
      for (int b = 0; b < c.d; ++b) {
        z += xi(a) * xi(b) * c.y[a][b].bottomRightCorner(c.n2, c.n2);
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetric_part(z), Eigen::EigenvaluesOnly);
    c1 = std::min(c1, es.eigenvalues().minCoeff());
  }
  return c1;
}

AssumptionDReport check_assumption_D(const SymbolicSystem& system,
                                     std::span<const Vec> samples,
                                     const AssumptionDOptions& options) {
  validate_shape(system);
  const int n1 = system.n1;
  const int n2 = system.n2;
  AssumptionDReport report;
  report.pass = true;
  report.min_c1 = std::numeric_limits<double>::infinity();
  for (const Vec& u : samples) {
    if (system.domain_check && !system.domain_check(u)) {
      throw Error(ErrorCode::kDomainViolation, "sample state outside the admissible set");
    }
    const FrozenCoefficients c = freeze_at(system, u);
    AssumptionDSample s;
    s.state = u;
    const double s0_scale = std::max(max_abs(c.s0), 1e-300);
    s.s0_symmetric = max_abs(c.s0 - c.s0.transpose()) <= options.tol * s0_scale;
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetric_part(c.s0), Eigen::EigenvaluesOnly);
    s.s0_min_eigenvalue = es.eigenvalues().minCoeff();
    s.s0_positive_definite = s.s0_min_eigenvalue > options.tol * s0_scale;
    const double off = std::max(max_abs(c.s0.topRightCorner(n1, n2)),
                                max_abs(c.s0.bottomLeftCorner(n2, n1)));
    s.s0_block_diagonal = off <= options.tol * s0_scale;
    if (!s.s0_symmetric) s.failures.push_back("D1: S0 not symmetric");
    if (!s.s0_positive_definite) s.failures.push_back("D1: S0 not positive definite");
    if (!s.s0_block_diagonal) s.failures.push_back("D1: S0 not block diagonal");

    for (int a = 0; a < c.d; ++a) {
      const double scale = std::max(max_abs(c.s_alpha[a]), 1.0);
      const double asym = max_abs(c.s_alpha[a] - c.s_alpha[a].transpose());
      if (asym > options.tol * scale) {
        s.asymmetric_s_alpha.emplace_back(a, asym);
        std::ostringstream msg;
        msg << "D2: S^" << (a + 1) << " not symmetric (|S - S^T| = " << asym << ")";
        s.failures.push_back(msg.str());
      }
    }

    s.y_block_form = true;
    for (int a = 0; a < c.d; ++a) {
      for (int b = 0; b < c.d; ++b) {
        const Mat& y = c.y[a][b];
        const double scale = std::max(max_abs(y), 1.0);
        const double outside = std::max({max_abs(y.topLeftCorner(n1, n1)),
                                         max_abs(y.topRightCorner(n1, n2)),
                                         max_abs(y.bottomLeftCorner(n2, n1))});
        if (outside > options.tol * scale) s.y_block_form = false;
      }
    }
    if (!s.y_block_form) s.failures.push_back("D3: Y not of block form diag(0, Z)");

    s.c1 = ellipticity_constant(c, options.sphere_count);
    if (!(s.c1 > options.c1_floor)) s.failures.push_back("D3: not strongly elliptic");
    s.pass = s.failures.empty();
    report.pass = report.pass && s.pass;
    report.min_c1 = std::min(report.min_c1, s.c1);
    report.samples.push_back(std::move(s));
  }
  if (samples.empty()) report.pass = false;
  return report;
}

// ---------------------------------------------------------------------------
// Affine-structure probes
// ---------------------------------------------------------------------------

namespace {

using BlockMap = std::function<Mat(const Vec&)>;


// max over samples and coordinates k in [k0, k1) of the central first
// difference, relative to 1 + |F(U)|.
double first_difference(const BlockMap& f, const std::vector<Vec>& samples,
                        int k0, int k1, double h) {
  double worst = 0.0;
  for (const Vec& u : samples) {
    const double scale = 1.0 + max_abs(f(u));
    for (int k = k0; k < k1; ++k) {
      Vec up = u, dn = u;
      up(k) += h;
      dn(k) -= h;
      worst = std::max(worst, max_abs(f(up) - f(dn)) / (2.0 * h) / scale);
    }
  }
  return worst;
}

// max of pure and mixed second differences over coordinates in [k0, k1).
double second_difference(const BlockMap& f, const std::vector<Vec>& samples,
                         int k0, int k1, double h) {
  double worst = 0.0;
  for (const Vec& u : samples) {
    const Mat f0 = f(u);
    const double scale = 1.0 + max_abs(f0);
    for (int k = k0; k < k1; ++k) {
      Vec up = u, dn = u;
      up(k) += h;
      dn(k) -= h;
      worst = std::max(worst, max_abs(f(up) - 2.0 * f0 + f(dn)) / (h * h) / scale);
      for (int l = k + 1; l < k1; ++l) {
        Vec pp = u, pm = u, mp = u, mm = u;
        pp(k) += h; pp(l) += h;
        pm(k) += h; pm(l) -= h;
        mp(k) -= h; mp(l) += h;
        mm(k) -= h; mm(l) -= h;
        const Mat mixed = f(pp) - f(pm) - f(mp) + f(mm);
        worst = std::max(worst, max_abs(mixed) / (4.0 * h * h) / scale);
      }
    }
  }
  return worst;
}

CheckItem make_item(std::string id, double measure, double tol, std::string detail) {
  CheckItem item;
  item.id = std::move(id);
  item.measure = measure;
  item.pass = measure <= tol;
  item.detail = std::move(detail);
  return item;
}

}  // namespace

const CheckItem* AssumptionEReport::find(const std::string& id) const {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

AssumptionEReport check_assumption_E(const SymbolicSystem& system,
                                     const ProbeSpec& probe) {
  validate_shape(system);
  const int n = system.n();
  const int n1 = system.n1;
  const int n2 = system.n2;
  std::vector<Vec> samples = probe.samples;
  if (samples.empty()) {
    samples.push_back(system.uref);
    for (int i = 0; i < n; ++i) {
      for (double sign : {-1.0, 1.0}) {
        Vec u = system.uref;
        u(i) += sign * 0.1 * std::max(std::abs(u(i)), 1.0);
        if (!system.domain_check || system.domain_check(u)) samples.push_back(u);
      }
    }
  }
  const double h = probe.step_rel * (system.uref.norm() + 1.0);
  const double tol = probe.tol;
  const double atol = probe.affine_tol;

  auto block = [&](const MatrixMap& f, int r0, int rn, int c0, int cn) -> BlockMap {
    return [&f, r0, rn, c0, cn](const Vec& u) -> Mat {
      return f(u).block(r0, c0, rn, cn);
    };
  };

  AssumptionEReport report;
  auto& items = report.items;

  // E1
  const BlockMap s0_11 = block(system.s0, 0, n1, 0, n1);
  const BlockMap s0_22 = block(system.s0, n1, n2, n1, n2);
  const double s0_11_var = first_difference(s0_11, samples, 0, n, h);
  items.push_back(make_item("E1.S0_11_constant", s0_11_var, tol,
                            "S0_11 independent of U (congruent to Id by a fixed rescaling of V1)"));
  {
    const Mat s = s0_11(system.uref);
    report.s0_11_identity =
        s0_11_var <= tol && max_abs(s - Mat::Identity(n1, n1)) <= 1e-12;
  }
  items.push_back(make_item("E1.S0_22_indep_U2", first_difference(s0_22, samples, n1, n, h),
                            tol, "S0_22 depends on U1 only"));

  // E2
  double asym = 0.0;
  double s11_affine = 0.0, s11_u1 = 0.0, s21_u2 = 0.0, s22_affine = 0.0;
  for (int a = 0; a < system.d; ++a) {
    const MatrixMap& sa = system.s_alpha[a];
    for (const Vec& u : samples) {
      const Mat m = sa(u);
      asym = std::max(asym, max_abs(m - m.transpose()) / (1.0 + max_abs(m)));
    }
    const BlockMap s11 = block(sa, 0, n1, 0, n1);
    const BlockMap s21 = block(sa, n1, n2, 0, n1);
    const BlockMap s22 = block(sa, n1, n2, n1, n2);
    s11_affine = std::max(s11_affine, second_difference(s11, samples, n1, n, h));
    s11_u1 = std::max(s11_u1, first_difference(s11, samples, 0, n1, h));
    s21_u2 = std::max(s21_u2, first_difference(s21, samples, n1, n, h));
    s22_affine = std::max(s22_affine, second_difference(s22, samples, n1, n, h));
  }
  items.push_back(make_item("E2.symmetric", asym, 1e-12, "S^alpha symmetric"));
  items.push_back(make_item("E2.S11_affine_U2", s11_affine, atol, "S^alpha_11 affine in U2"));
  items.push_back(make_item("E2.S11_indep_U1", s11_u1, tol, "S^alpha_11 independent of U1"));
  items.push_back(make_item("E2.S21_indep_U2", s21_u2, tol, "S^alpha_21 independent of U2"));
  items.push_back(make_item("E2.S22_affine_U2", s22_affine, atol, "S^alpha_22 affine in U2"));

  // E3
  double y_u2 = 0.0;
  double y_outside = 0.0;
  for (int a = 0; a < system.d; ++a) {
    for (int b = 0; b < system.d; ++b) {
      y_u2 = std::max(y_u2, first_difference(system.y[a][b], samples, n1, n, h));
      for (const Vec& u : samples) {
        const Mat y = system.y[a][b](u);
        y_outside = std::max({y_outside, max_abs(y.topLeftCorner(n1, n1)),
                              max_abs(y.topRightCorner(n1, n2)),
                              max_abs(y.bottomLeftCorner(n2, n1))});
      }
    }
  }
  items.push_back(make_item("E3.Y_indep_U2", y_u2, tol, "Y^alpha,beta independent of U2"));
  items.push_back(make_item("E3.Y_block_form", y_outside, 1e-12, "Y = diag(0, Z)"));
  double c1 = std::numeric_limits<double>::infinity();
  for (const Vec& u : samples) c1 = std::min(c1, ellipticity_constant(freeze_at(system, u)));
  {
    CheckItem item;
    item.id = "E3.elliptic";
    item.measure = c1;
    item.pass = c1 > 1e-12;
    item.detail = "strong ellipticity constant at the probe states";
    items.push_back(item);
  }

  // E4
  {
    CheckItem item;
    item.id = "E4.f_zero";
    item.measure = system.source_free ? 0.0 : 1.0;
    item.pass = system.source_free;
    item.detail = "source term f vanishes identically";
    items.push_back(item);
  }

  report.pass = std::all_of(items.begin(), items.end(),
                            [](const CheckItem& i) { return i.pass; });
  return report;
}

}  // namespace pdsys
