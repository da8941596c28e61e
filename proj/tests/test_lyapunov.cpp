#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "pdsys/error.hpp"
#include "pdsys/lyapunov.hpp"
#include "pdsys/models.hpp"

using namespace pdsys;

namespace {

std::vector<GeneratorSymbol> full_generators(const SymbolicSystem& sys, int count = 0) {
  std::vector<GeneratorSymbol> gens;
  for (const Vec& omega : sample_sphere(sys.d, count)) {
    gens.push_back(full_generator(evaluate_symbols(sys, omega)));
  }
  return gens;
}

// Checks both certified inequalities at every grid point.
void check_certificate(const std::vector<GeneratorSymbol>& gens, const LyapunovParams& params,
                       const std::vector<double>& grid) {
  for (const auto& g : gens) {
    for (double rho : grid) {
      const FlowRates r = lyapunov_derivative_along_flow(rho, g, params);
      CAPTURE(rho);
      CHECK(r.min_eig_h >= 1.0 / params.equivalence_C);
      CHECK(r.max_eig_h <= params.equivalence_C);
      CHECK(r.min_eig_d >=
            params.dissipation_c * dissipation_rate_scale(rho, params.a, params.b, params.kappa) *
                r.max_eig_h * (1.0 - 1e-12));
      CHECK(interaction_constant(rho, g, params) <= params.interaction_C * (1.0 + 1e-9));
    }
  }
}

}  // namespace

TEST_CASE("weight and rate scales") {
  CHECK(functional_weight(0.1, 1, 2, 1.0) == doctest::Approx(0.1));
  CHECK(functional_weight(10.0, 1, 2, 1.0) == doctest::Approx(0.1));
  CHECK(functional_weight(4.0, 1, 0, 0.5) == doctest::Approx(0.5));
  CHECK(dissipation_rate_scale(0.1, 1, 2, 1.0) == doctest::Approx(0.01));
  CHECK(dissipation_rate_scale(10.0, 1, 2, 2.0) == doctest::Approx(2.0));
  CHECK(dissipation_rate_scale(10.0, 1, 0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("toy1d weights are certified over the default grid") {
  const SymbolicSystem toy = make_toy1d();
  const auto gens = full_generators(toy);
  const LyapunovParams p = select_epsilons(gens, 0.0, default_rho_grid());
  CHECK(p.certified);
  CHECK(p.epsilons.size() == 2);
  CHECK(p.dissipation_c > 0.0);
  CHECK(p.equivalence_C >= 1.0);
  check_certificate(gens, p, default_rho_grid());
}

TEST_CASE("NS weights are certified over the sphere") {
  const SymbolicSystem ns = make_model("ns-baro");
  const auto gens = full_generators(ns, 16);
  const LyapunovParams p = select_epsilons(gens, 0.0, default_rho_grid());
  CHECK(p.certified);
  check_certificate(gens, p, default_rho_grid());
}

TEST_CASE("smaller weights stay certified") {
  const auto gens = full_generators(make_toy1d());
  LyapunovParams p = select_epsilons(gens, 0.0, default_rho_grid());
  for (double scale : {0.5, 0.1, 0.01}) {
    LyapunovParams q = p;
    for (double& e : q.epsilons) e *= scale;
    const Certification c = certify(gens, q, default_rho_grid());
    CAPTURE(scale);
    CHECK(c.ok);
    CHECK(c.dissipation_c > 0.0);
  }
}

TEST_CASE("reduced pair certifies with (a, b) = (1, 0)") {
  const SymbolicSystem ns = make_model("ns-baro");
  std::vector<GeneratorSymbol> gens;
  for (const Vec& omega : sample_sphere(2, 8)) gens.push_back(reduced_generator(evaluate_symbols(ns, omega)));
  const LyapunovParams p = select_epsilons(gens, 0.0, default_rho_grid());
  CHECK(p.b == 0);
  check_certificate(gens, p, default_rho_grid());
}

TEST_CASE("the functional is equivalent to the energy") {
  const SymbolicSystem toy = make_toy1d();
  const FrequencySymbol sym = evaluate_symbols(toy, Vec::Ones(1));
  const LyapunovParams p = select_epsilons(sym, 1, 2, 0.0, default_rho_grid());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (double rho : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    for (int i = 0; i < 10; ++i) {
      CVec v(2);
      v << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      const double l = lyapunov_value(v, rho, sym, p);
      CHECK(l >= v.squaredNorm() / p.equivalence_C);
      CHECK(l <= v.squaredNorm() * p.equivalence_C);
    }
    const GeneratorSymbol gen = full_generator(sym);
    const CMat h = lyapunov_matrix(gen, rho, p);
    const CMat h2 = gen.s + functional_weight(rho, 1, 2, p.kappa) * interaction_matrix(gen, p);
    CHECK((h - h2).norm() < 1e-14);
  }
}

TEST_CASE("select_epsilons errors") {
  const FrequencySymbol decoupled = evaluate_symbols(make_decoupled_toy(), Vec::Ones(1));
  try {
    select_epsilons(decoupled, 1, 2, 0.0, default_rho_grid());
    FAIL("expected SkFails");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSkFails);
  }
  const FrequencySymbol toy = evaluate_symbols(make_toy1d(), Vec::Ones(1));
  const LyapunovParams p = select_epsilons(toy, 1, 2, 0.0, default_rho_grid());
  try {
    lyapunov_value(CVec::Ones(2), 0.0, toy, p);
    FAIL("expected NonPositiveRho");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveRho);
  }
}

TEST_CASE("toy1d decay rates") {
  const SymbolicSystem toy = make_toy1d();
  const Vec omega = Vec::Ones(1);
  CHECK(spectral_decay_rate(toy, omega, 0.1) == doctest::Approx(0.005).epsilon(1e-3));
  CHECK(spectral_decay_rate(toy, omega, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(spectral_decay_rate(toy, omega, 10.0) - 1.0102) < 1e-3);
}

TEST_CASE("rate envelope") {
  const EnvelopeReport toy = rate_envelope_fit(make_toy1d(), Vec::Ones(1), default_rho_grid());
  CHECK(std::abs(toy.low_slope - 2.0) <= 0.05);
  CHECK(std::abs(toy.plateau - 1.0) <= 0.05);
  CHECK(std::abs(toy.high_slope) <= 0.05);
  CHECK(toy.crossover_rho > 0.1);
  CHECK(toy.crossover_rho < 10.0);

  const EnvelopeReport heat = rate_envelope_fit(make_pure_parabolic(), Vec::Ones(1), default_rho_grid());
  CHECK(std::abs(heat.low_slope - 2.0) <= 0.05);
  CHECK(std::abs(heat.high_slope - 2.0) <= 0.05);

  for (const auto& grid : {std::vector<double>{1.0}, log_grid(1e-2, 10.0, 40),
                           std::vector<double>{1e-3, 1e-1, 10.0, 1e3}}) {
    try {
      rate_envelope_fit(make_toy1d(), Vec::Ones(1), grid);
      FAIL("expected InsufficientGrid");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInsufficientGrid);
    }
  }
}

TEST_CASE("strict dissipativity of the models") {
  for (const char* key : {"toy1d", "ns-baro", "mhd"}) {
    const SymbolicSystem sys = make_model(key);
    for (const Vec& omega : sample_sphere(sys.d, 16)) {
      for (double rho : {1e-2, 1.0, 1e2}) {
        CAPTURE(key);
        CHECK(spectral_decay_rate(sys, omega, rho) > 0.0);
      }
    }
  }
}
