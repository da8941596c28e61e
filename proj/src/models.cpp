#include "pdsys/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "pdsys/error.hpp"

namespace pdsys {
namespace {

MatrixMap constant_map(const Mat& m) {
  return [m](const Vec&) { return m; };
}

double param(const ModelParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const ModelParams& params, const std::set<std::string>& allowed,
                    const std::string& model) {
  for (const auto& [key, value] : params) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kParameterViolation,
                  "unknown parameter '" + key + "' for model " + model);
    }
  }
}

int to_dimension(double v) {
  const int d = static_cast<int>(std::lround(v));
  if (d < 1 || std::abs(v - d) > 0.0) {
    throw Error(ErrorCode::kParameterViolation, "dimension must be a positive integer");
  }
  return d;
}

}  // namespace

SymbolicSystem make_constant_system(std::string name, int n1, int n2, const Mat& s0,
                                    const std::vector<Mat>& s_alpha,
                                    const std::vector<std::vector<Mat>>& y) {
  SymbolicSystem sys;
  sys.name = std::move(name);
  sys.d = static_cast<int>(s_alpha.size());
  sys.n1 = n1;
  sys.n2 = n2;
  sys.uref = Vec::Zero(n1 + n2);
  sys.s0 = constant_map(s0);
  for (const Mat& s : s_alpha) sys.s_alpha.push_back(constant_map(s));
  for (const auto& row : y) {
    std::vector<MatrixMap> maps;
    for (const Mat& m : row) maps.push_back(constant_map(m));
    sys.y.push_back(std::move(maps));
  }
  sys.domain_check = [](const Vec&) { return true; };
  validate_shape(sys);
  return sys;
}

SymbolicSystem make_toy1d() {
  Mat s1(2, 2);
  s1 << 0, 1, 1, 0;
  Mat y11 = Mat::Zero(2, 2);
  y11(1, 1) = 1.0;
  return make_constant_system("toy1d", 1, 1, Mat::Identity(2, 2), {s1}, {{y11}});
}

SymbolicSystem make_decoupled_toy() {
  Mat y11 = Mat::Zero(2, 2);
  y11(1, 1) = 1.0;
  return make_constant_system("toy1d-decoupled", 1, 1, Mat::Identity(2, 2),
                              {Mat::Zero(2, 2)}, {{y11}});
}

SymbolicSystem make_pure_parabolic(int d, double diffusivity) {
  if (d < 1) throw Error(ErrorCode::kParameterViolation, "dimension must be >= 1");
  if (!(diffusivity > 0.0)) throw Error(ErrorCode::kParameterViolation, "diffusivity must be positive");
  std::vector<Mat> s(static_cast<std::size_t>(d), Mat::Zero(1, 1));
  std::vector<std::vector<Mat>> y(d, std::vector<Mat>(d, Mat::Zero(1, 1)));
  for (int a = 0; a < d; ++a) y[a][a](0, 0) = diffusivity;
  return make_constant_system("parabolic", 0, 1, Mat::Identity(1, 1), s, y);
}

PressureLaw gamma_law(double coeff, double gamma) {
  PressureLaw law;
  law.p = [coeff, gamma](double rho) { return coeff * std::pow(rho, gamma); };
  law.dp = [coeff, gamma](double rho) { return coeff * gamma * std::pow(rho, gamma - 1.0); };
  return law;
}

SymbolicSystem make_barotropic_ns(int d, double mu, double lambda,
                                  const PressureLaw& pressure, double rho_ref) {
  if (d < 1) throw Error(ErrorCode::kParameterViolation, "dimension must be >= 1");
  if (!(mu > 0.0)) throw Error(ErrorCode::kParameterViolation, "mu > 0 fails");
  if (!(2.0 * mu + lambda > 0.0)) throw Error(ErrorCode::kParameterViolation, "nu = 2mu + lambda > 0 fails");
  if (!(rho_ref > 0.0)) throw Error(ErrorCode::kParameterViolation, "reference density must be positive");
  if (!(pressure.dp(rho_ref) > 0.0)) throw Error(ErrorCode::kParameterViolation, "p'(rho) > 0 fails");

  const int n = d + 1;
  SymbolicSystem sys;
  sys.name = "ns-baro";
  sys.d = d;
  sys.n1 = 1;
  sys.n2 = d;
  sys.uref = Vec::Zero(n);
  sys.uref(0) = rho_ref;
  auto dp = pressure.dp;
  sys.s0 = [dp, n](const Vec& u) {
    Mat s = Mat::Zero(n, n);
    s(0, 0) = dp(u(0)) / u(0);
    for (int i = 1; i < n; ++i) s(i, i) = u(0);
    return s;
  };
  for (int a = 0; a < d; ++a) {
    sys.s_alpha.push_back([dp, n, a](const Vec& u) {
      const double rho = u(0);
      const double ua = u(1 + a);
      Mat s = Mat::Zero(n, n);
      s(0, 0) = dp(rho) / rho * ua;
      s(0, 1 + a) = dp(rho);
      s(1 + a, 0) = dp(rho);
      for (int i = 1; i < n; ++i) s(i, i) = rho * ua;
      return s;
    });
  }
  sys.y.resize(d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Mat y = Mat::Zero(n, n);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          double v = 0.0;
          if (a == b && i == j) v += mu;
          if (i == b && j == a) v += mu;
          if (i == a && j == b) v += lambda;
          y(1 + i, 1 + j) = v;
        }
      }
      sys.y[a].push_back(constant_map(y));
    }
  }
  sys.domain_check = [](const Vec& u) { return u(0) > 0.0; };
  validate_shape(sys);
  return sys;
}

Thermodynamics ideal_gas() {
  Thermodynamics t;
  t.p = [](double rho, double theta) { return rho * theta; };
  t.p_rho = [](double, double theta) { return theta; };
  t.p_theta = [](double rho, double) { return rho; };
  t.e = [](double, double theta) { return theta; };
  t.e_theta = [](double, double) { return 1.0; };
  return t;
}

MhdTransport constant_transport(double mu, double lambda, double k, double sigma,
                                double mu0) {
  MhdTransport tr;
  tr.mu = [mu](double, double) { return mu; };
  tr.lambda = [lambda](double, double) { return lambda; };
  tr.k = [k](double, double) { return k; };
  tr.sigma = [sigma](double, double) { return sigma; };
  tr.mu0 = mu0;
  return tr;
}

Vec mhd_default_state() {
  Vec u = Vec::Zero(8);
  u(0) = 1.0;
  u(4) = 1.0;
  u(5) = 1.0;
  return u;
}

AssumptionGReport check_assumption_G(const Thermodynamics& thermo,
                                     const MhdTransport& transport,
                                     std::span<const Vec> samples) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double p_rho = kInf, e_theta = kInf, mu = kInf, nu = kInf, k = kInf, sigma = kInf;
  for (const Vec& u : samples) {
    if (u.size() < 5) throw Error(ErrorCode::kShapeMismatch, "state needs (rho, u, theta, ...)");
    const double rho = u(0);
    const double theta = u(4);
    p_rho = std::min(p_rho, thermo.p_rho(rho, theta));
    e_theta = std::min(e_theta, thermo.e_theta(rho, theta));
    const double m = transport.mu(rho, theta);
    mu = std::min(mu, m);
    nu = std::min(nu, 2.0 * m + transport.lambda(rho, theta));
    k = std::min(k, transport.k(rho, theta));
    sigma = std::min(sigma, transport.sigma(rho, theta));
  }
  AssumptionGReport rep;
  auto add = [&](const char* id, double value, const char* detail) {
    CheckItem item;
    item.id = id;
    item.measure = value;
    item.pass = value > 0.0 && !samples.empty();
    item.detail = detail;
    rep.items.push_back(item);
  };
  add("G1.p_rho", p_rho, "p_rho > 0");
  add("G1.e_theta", e_theta, "e_theta > 0");
  add("G2.mu", mu, "mu > 0");
  add("G2.nu", nu, "nu = 2mu + lambda > 0");
  add("G2.k", k, "k > 0");
  add("G3.sigma", sigma, "sigma > 0");
  if (transport.mu0 <= 0.0) add("G3.mu0", transport.mu0, "mu0 > 0");
  rep.pass = std::all_of(rep.items.begin(), rep.items.end(),
                         [](const CheckItem& i) { return i.pass; });
  return rep;
}

SymbolicSystem make_mhd(const Thermodynamics& thermo, const MhdTransport& transport,
                        const Vec& state_ref) {
  if (state_ref.size() != 8) throw Error(ErrorCode::kShapeMismatch, "MHD state has 8 components");
  if (!(state_ref(0) > 0.0) || !(state_ref(4) > 0.0)) {
    throw Error(ErrorCode::kDomainViolation, "reference density and temperature must be positive");
  }
  const Vec samples[] = {state_ref};
  const AssumptionGReport g = check_assumption_G(thermo, transport, samples);
  if (!g.pass) {
    std::string failed;
    for (const auto& item : g.items) {
      if (!item.pass) failed += (failed.empty() ? "" : ", ") + item.detail;
    }
    throw Error(ErrorCode::kAssumptionGViolation, failed);
  }

  constexpr int n = 8;
  const double mu0 = transport.mu0;
  SymbolicSystem sys;
  sys.name = "mhd";
  sys.d = 3;
  sys.n1 = 1;
  sys.n2 = 7;
  sys.uref = state_ref;
  sys.s0 = [thermo, mu0](const Vec& u) {
    const double rho = u(0), theta = u(4);
    Mat s = Mat::Zero(n, n);
    s(0, 0) = thermo.p_rho(rho, theta) / rho;
    for (int i = 1; i <= 3; ++i) s(i, i) = rho;
    s(4, 4) = rho * thermo.e_theta(rho, theta) / theta;
    for (int i = 5; i < 8; ++i) s(i, i) = 1.0 / mu0;
    return s;
  };
  for (int a = 0; a < 3; ++a) {
    sys.s_alpha.push_back([thermo, mu0, a](const Vec& u) {
      const double rho = u(0), theta = u(4);
      const double ua = u(1 + a);
      const double ba = u(5 + a);
      const double pr = thermo.p_rho(rho, theta);
      const double pt = thermo.p_theta(rho, theta);
      Mat s = Mat::Zero(n, n);
      s(0, 0) = pr / rho * ua;
      s(0, 1 + a) = pr;
      s(1 + a, 0) = pr;
      for (int i = 1; i <= 3; ++i) s(i, i) = rho * ua;
      s(1 + a, 4) = pt;
      s(4, 1 + a) = pt;
      s(4, 4) = rho * thermo.e_theta(rho, theta) / theta * ua;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          // velocity row, field column: ξ_i B_j − (B·ξ)δ_ij with ξ = e_a.
          const double ub = ((i == a) ? u(5 + j) : 0.0) - ((i == j) ? ba : 0.0);
          // field row, velocity column: B_i ξ_j − (B·ξ)δ_ij.
          const double bu = ((j == a) ? u(5 + i) : 0.0) - ((i == j) ? ba : 0.0);
          s(1 + i, 5 + j) = ub / mu0;
          s(5 + i, 1 + j) = bu / mu0;
        }
        s(5 + i, 5 + i) = ua / mu0;
      }
      return s;
    });
  }
  sys.y.resize(3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      sys.y[a].push_back([transport, mu0, a, b](const Vec& u) {
        const double rho = u(0), theta = u(4);
        const double mu = transport.mu(rho, theta);
        const double lambda = transport.lambda(rho, theta);
        Mat y = Mat::Zero(n, n);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            if (a == b && i == j) v += mu;
            if (i == b && j == a) v += mu;
            if (i == a && j == b) v += lambda;
            y(1 + i, 1 + j) = v;
          }
        }
        if (a == b) {
          y(4, 4) = transport.k(rho, theta) / theta;
          const double mag = 1.0 / (mu0 * mu0 * transport.sigma(rho, theta));
          for (int i = 5; i < 8; ++i) y(i, i) = mag;
        }
        return y;
      });
    }
  }
  sys.domain_check = [](const Vec& u) { return u(0) > 0.0 && u(4) > 0.0; };
  // The quadratic source exists but is not evolved; the flag records f ≢ 0.
  sys.source_free = false;
  validate_shape(sys);
  return sys;
}

std::vector<std::string> model_keys() {
  return {"toy1d", "toy1d-decoupled", "parabolic", "ns-baro", "mhd"};
}

SymbolicSystem make_model(const std::string& key, const ModelParams& params) {
  if (key == "toy1d") {
    reject_unknown(params, {}, key);
    return make_toy1d();
  }
  if (key == "toy1d-decoupled") {
    reject_unknown(params, {}, key);
    return make_decoupled_toy();
  }
  if (key == "parabolic") {
    reject_unknown(params, {"d", "diffusivity"}, key);
    return make_pure_parabolic(to_dimension(param(params, "d", 1.0)),
                               param(params, "diffusivity", 1.0));
  }
  if (key == "ns-baro") {
    reject_unknown(params, {"d", "mu", "lambda", "pressure_coeff", "gamma", "rho_ref"}, key);
    return make_barotropic_ns(to_dimension(param(params, "d", 2.0)), param(params, "mu", 1.0),
                              param(params, "lambda", 0.0),
                              gamma_law(param(params, "pressure_coeff", 1.0),
                                        param(params, "gamma", 2.0)),
                              param(params, "rho_ref", 1.0));
  }
  if (key == "mhd") {
    reject_unknown(params, {"mu", "lambda", "k", "sigma", "mu0", "rho", "u1", "u2", "u3",
                            "theta", "B1", "B2", "B3"},
                   key);
    Vec state = mhd_default_state();
    const char* names[] = {"rho", "u1", "u2", "u3", "theta", "B1", "B2", "B3"};
    for (int i = 0; i < 8; ++i) state(i) = param(params, names[i], state(i));
    return make_mhd(ideal_gas(),
                    constant_transport(param(params, "mu", 1.0), param(params, "lambda", 1.0),
                                       param(params, "k", 1.0), param(params, "sigma", 1.0),
                                       param(params, "mu0", 1.0)),
                    state);
  }
  throw Error(ErrorCode::kModelUnknown, "unknown model '" + key + "'");
}

}  // namespace pdsys
