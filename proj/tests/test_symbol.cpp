#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "pdsys/error.hpp"
#include "pdsys/models.hpp"
#include "pdsys/symbol.hpp"

using namespace pdsys;

namespace {

Vec unit(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out / out.norm();
}

}  // namespace

TEST_CASE("toy1d symbols at omega = 1") {
  const FrequencySymbol sym = evaluate_symbols(make_toy1d(), unit({1.0}));
  CMat a(2, 2);
  a << 0.0, kI, kI, 0.0;
  CHECK((sym.a_omega - a).norm() < 1e-15);
  CHECK((sym.b_omega - Vec(Vec::Unit(2, 1)).asDiagonal().toDenseMatrix()).norm() < 1e-15);
  CHECK(sym.z_omega(0, 0) == doctest::Approx(1.0));
  CHECK(sym.s21(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(sym.mred(0, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(sym.nred(0, 0)) < 1e-15);
}

TEST_CASE("MHD Z at e1 is block diagonal with the transport blocks") {
  const FrequencySymbol sym = evaluate_symbols(make_model("mhd"), unit({1.0, 0.0, 0.0}));
  Mat expected = Mat::Zero(7, 7);
  expected.topLeftCorner(3, 3) = Mat::Identity(3, 3);
  expected(0, 0) += 2.0;  // μ + λ on e1⊗e1
  expected(3, 3) = 1.0;   // k/θ̄
  expected.bottomRightCorner(3, 3) = Mat::Identity(3, 3);  // (μ₀²σ)⁻¹
  CHECK((sym.z_omega - expected).norm() < 1e-14);
}

TEST_CASE("symbol invariants over sampled directions") {
  for (const char* key : {"toy1d", "ns-baro", "mhd"}) {
    const SymbolicSystem sys = make_model(key);
    const double c1 = check_assumption_D(sys, std::vector<Vec>{sys.uref}).min_c1;
    for (const Vec& omega : sample_sphere(sys.d, 32)) {
      const FrequencySymbol sym = evaluate_symbols(sys, omega);
      CAPTURE(key);
      // A_ω skew-Hermitian: Re(A_ω η·η) = 0.
      CHECK((sym.a_omega + sym.a_omega.adjoint()).norm() < 1e-12);
      CHECK(sym.b_omega.topLeftCorner(sys.n1, sys.n1).norm() == 0.0);
      CHECK((sym.b_omega - sym.b_omega.transpose()).norm() < 1e-12);
      CHECK(Eigen::SelfAdjointEigenSolver<Mat>(sym.b_omega).eigenvalues().minCoeff() > -1e-12);
      const Mat zh = 0.5 * (sym.z_omega + sym.z_omega.transpose());
      CHECK(Eigen::SelfAdjointEigenSolver<Mat>(zh).eigenvalues().minCoeff() >= c1 - 1e-12);
      CHECK((sym.s12 - sym.s21.transpose()).norm() < 1e-12);
    }
  }
}

TEST_CASE("evaluate_symbols errors") {
  const SymbolicSystem toy = make_toy1d();
  CHECK_THROWS_AS(evaluate_symbols(toy, Vec::Constant(1, 1.1)), Error);
  try {
    evaluate_symbols(toy, Vec::Constant(1, 1.1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonUnitDirection);
  }
  const SymbolicSystem degenerate = make_constant_system(
      "degenerate", 1, 1, Mat::Identity(2, 2), {Mat::Identity(2, 2)}, {{Mat::Zero(2, 2)}});
  try {
    evaluate_symbols(degenerate, unit({1.0}));
    FAIL("expected SingularZ");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularZ);
  }
  Mat s0 = Mat::Identity(2, 2);
  s0(0, 0) = 0.0;
  const SymbolicSystem singular = make_constant_system(
      "singular", 1, 1, s0, {Mat::Identity(2, 2)}, {{Vec(Vec::Unit(2, 1)).asDiagonal()}});
  try {
    evaluate_symbols(singular, unit({1.0}));
    FAIL("expected SingularS0");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularS0);
  }
}

TEST_CASE("sphere sampling") {
  CHECK(sample_sphere(1).size() == 2);
  CHECK(sample_sphere(2).size() == 64);
  CHECK(sample_sphere(3).size() == 256);
  CHECK(sample_sphere(3, 10).size() == 10);
  for (int d : {1, 2, 3, 4}) {
    for (const Vec& w : sample_sphere(d, 20)) CHECK(std::abs(w.norm() - 1.0) < 1e-12);
  }
  CHECK(sample_sphere(3, 50) == sample_sphere(3, 50));
}

TEST_CASE("normal-form structure checks") {
  SUBCASE("toy1d passes with c1 = 1") {
    const SymbolicSystem toy = make_toy1d();
    const AssumptionDReport rep = check_assumption_D(toy, std::vector<Vec>{toy.uref});
    CHECK(rep.pass);
    CHECK(rep.min_c1 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("non-symmetric S1 is reported with its index and size") {
    Mat s1(2, 2);
    s1 << 0.0, 1.0, 2.0, 0.0;
    const SymbolicSystem bad = make_constant_system(
        "bad", 1, 1, Mat::Identity(2, 2), {s1}, {{Vec(Vec::Unit(2, 1)).asDiagonal()}});
    const AssumptionDReport rep = check_assumption_D(bad, std::vector<Vec>{bad.uref});
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.samples[0].asymmetric_s_alpha.size() == 1);
    CHECK(rep.samples[0].asymmetric_s_alpha[0].first == 0);
    CHECK(rep.samples[0].asymmetric_s_alpha[0].second == doctest::Approx(1.0));
  }
  SUBCASE("MHD c1 is the smallest transport coefficient") {
    const SymbolicSystem mhd = make_model("mhd", {{"mu", 0.7}, {"lambda", 0.2}, {"k", 2.0},
                                                   {"sigma", 4.0}, {"mu0", 1.0}});
    const AssumptionDReport rep = check_assumption_D(mhd, std::vector<Vec>{mhd.uref});
    CHECK(rep.pass);
    // min(μ, ν, k/θ̄, (μ₀²σ)⁻¹) = min(0.7, 1.6, 2, 0.25).
    CHECK(rep.min_c1 == doctest::Approx(0.25).epsilon(1e-9));
  }
  SUBCASE("samples outside the domain are rejected") {
    const SymbolicSystem ns = make_model("ns-baro");
    Vec bad = ns.uref;
    bad(0) = -1.0;
    try {
      check_assumption_D(ns, std::vector<Vec>{bad});
      FAIL("expected DomainViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDomainViolation);
    }
  }
}

TEST_CASE("affine-structure probes") {
  CHECK(check_assumption_E(make_model("ns-baro")).pass);
  CHECK(check_assumption_E(make_toy1d()).pass);
  const AssumptionEReport mhd = check_assumption_E(make_model("mhd"));
  CHECK_FALSE(mhd.pass);
  const CheckItem* e1 = mhd.find("E1.S0_22_indep_U2");
  REQUIRE(e1 != nullptr);
  CHECK_FALSE(e1->pass);
  const CheckItem* e4 = mhd.find("E4.f_zero");
  REQUIRE(e4 != nullptr);
  CHECK_FALSE(e4->pass);
}

TEST_CASE("perturbation grid has 3^n admissible states") {
  CHECK(perturbation_grid(make_model("ns-baro")).size() == 27);
  CHECK(perturbation_grid(make_toy1d()).size() == 9);
}
