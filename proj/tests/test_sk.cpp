#include <doctest.h>

#include <Eigen/LU>

#include "pdsys/error.hpp"
#include "pdsys/models.hpp"
#include "pdsys/sk.hpp"
#include "random_pairs.hpp"

using namespace pdsys;

namespace {

CMat toy_n() {
  CMat n(2, 2);
  n << 0.0, kI, kI, 0.0;
  return n;
}

CMat diag(std::initializer_list<Complex> v) {
  CVec d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex x : v) d(i++) = x;
  return d.asDiagonal();
}

double positivity(const CMat& n, const CMat& m) {
  return hypocoercivity_positivity(n / std::max(n.norm(), 1e-300), m / std::max(m.norm(), 1e-300),
                                   std::vector<double>(n.rows(), 1.0));
}

}  // namespace

TEST_CASE("kalman_matrix") {
  SUBCASE("N = 0, M = I") {
    const CMat k = kalman_matrix(CMat::Zero(2, 2), CMat::Identity(2, 2));
    CHECK(k.rows() == 4);
    CHECK((k.topRows(2) - CMat::Identity(2, 2)).norm() == 0.0);
    CHECK(k.bottomRows(2).norm() == 0.0);
  }
  SUBCASE("toy1d pair") {
    const CMat k = kalman_matrix(toy_n(), diag({0.0, 1.0}));
    CMat expected(4, 2);
    expected << 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, kI, 0.0;
    CHECK((k - expected).norm() < 1e-15);
  }
  SUBCASE("N = I fixes the powers") {
    const CMat m = diag({1.0, 0.0});
    const CMat k = kalman_matrix(CMat::Identity(2, 2), m);
    CHECK((k.topRows(2) - m).norm() == 0.0);
    CHECK((k.bottomRows(2) - m).norm() == 0.0);
  }
  SUBCASE("shape mismatch") {
    try {
      kalman_matrix(CMat::Zero(2, 2), CMat::Zero(3, 3));
      FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kShapeMismatch);
    }
  }
}

TEST_CASE("kalman_rank_holds") {
  const SkVerdict toy = kalman_rank_holds(toy_n(), diag({0.0, 1.0}));
  CHECK(toy.holds);
  CHECK(toy.rank == 2);

  const SkVerdict zero = kalman_rank_holds(toy_n(), CMat::Zero(2, 2));
  CHECK_FALSE(zero.holds);
  CHECK(zero.rank == 0);

  const SkVerdict split = kalman_rank_holds(diag({kI, -kI}), diag({0.0, 1.0}));
  CHECK_FALSE(split.holds);
  CHECK(split.rank == 1);
  REQUIRE(split.witness.has_value());
  CHECK(std::abs(std::abs((*split.witness)(0)) - 1.0) < 1e-12);
  CHECK(std::abs((*split.witness)(1)) < 1e-12);
}

TEST_CASE("witness certifies the failure") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testing::random_pair(2 + trial % 5, 1 + trial % 2, rng);
    for (const SkVerdict& v : {kalman_rank_holds(p.n, p.m), sk_eigenvector_check(p.n, p.m)}) {
      REQUIRE_FALSE(v.holds);
      REQUIRE(v.witness.has_value());
      const CVec& w = *v.witness;
      CHECK(std::abs(w.norm() - 1.0) < 1e-12);
      CHECK((p.m * w).norm() <= 1e-8 * p.m.norm());
      CHECK((p.n * w - v.lambda * w).norm() <= 1e-8 * p.n.norm());
    }
  }
}

TEST_CASE("eigenvector oracle") {
  const SkVerdict toy = sk_eigenvector_check(toy_n(), diag({0.0, 1.0}));
  CHECK(toy.holds);
  CHECK(toy.method == SkMethod::kEigenvector);

  const SkVerdict zero = sk_eigenvector_check(toy_n(), CMat::Zero(2, 2));
  CHECK_FALSE(zero.holds);
  CHECK(zero.witness.has_value());

  const SkVerdict split = sk_eigenvector_check(diag({kI, -kI}), diag({0.0, 1.0}));
  CHECK_FALSE(split.holds);
  CHECK(std::abs(std::abs((*split.witness)(0)) - 1.0) < 1e-12);

  // The literal reading keeps only real eigenvalues; the symbols have none.
  CHECK(sk_eigenvector_check(diag({kI, -kI}), diag({0.0, 1.0}), kEigenvectorTol,
                             SpectrumFilter::kReal)
            .holds);
}

TEST_CASE("Kalman, eigenvector and positivity verdicts agree on random pairs") {
  std::mt19937_64 rng(7);
  int disagreements = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto p = testing::random_pair(n, trial, rng);
      const bool kalman = kalman_rank_holds(p.n, p.m).holds;
      const bool eig = sk_eigenvector_check(p.n, p.m).holds;
      const bool pos = positivity(p.n, p.m) > 1e-12;
      CHECK(kalman == !p.planted_failure);
      if (kalman != eig || kalman != pos) ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("sk_over_sphere on the models") {
  const SkSphereReport mhd = sk_over_sphere(make_model("mhd"), 256);
  CHECK(mhd.rows.size() == 256);
  CHECK(mhd.pass);
  CHECK(mhd.reduced_agreement);

  const SkSphereReport ns = sk_over_sphere(make_model("ns-baro"));
  CHECK(ns.pass);
  CHECK(ns.reduced_agreement);

  const SkSphereReport decoupled = sk_over_sphere(make_decoupled_toy());
  CHECK_FALSE(decoupled.pass);
  CHECK(decoupled.failing == static_cast<int>(decoupled.rows.size()));
  for (const auto& row : decoupled.rows) CHECK_FALSE(row.full.holds);
}

TEST_CASE("block reduction") {
  SUBCASE("toy1d blocks") {
    const CMat i1 = CMat::Constant(1, 1, kI);
    const BlockReductionResult r =
        block_sk_reduction_check(CMat::Zero(1, 1), i1, i1, CMat::Zero(1, 1),
                                 CMat::Identity(1, 1), CMat::Identity(1, 1));
    CHECK(r.full_holds);
    CHECK(r.reduced_holds);
    CHECK(r.equivalence_asserted);
    CHECK(r.consistent);
  }
  SUBCASE("symbol blocks of the models") {
    for (const char* key : {"ns-baro", "mhd"}) {
      const SymbolicSystem sys = make_model(key);
      for (const Vec& omega : sample_sphere(sys.d, 16)) {
        const FrequencySymbol sym = evaluate_symbols(sys, omega);
        const int n1 = sym.n1;
        const int n2 = sym.n2;
        // Symmetric scaling T = (S̄⁰)^{−1/2}, so that N₂₁* = −N₁₂.
        const CMat t = sym.s0.diagonal().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal();
        const CMat nn = t * sym.a_omega * t;
        const CMat mm = t * sym.b_omega.cast<Complex>() * t;
        const CMat m22 = mm.bottomRightCorner(n2, n2);
        const BlockReductionResult r = block_sk_reduction_check(
            nn.topLeftCorner(n1, n1), nn.topRightCorner(n1, n2), nn.bottomLeftCorner(n2, n1),
            nn.bottomRightCorner(n2, n2), m22, m22.inverse());
        CHECK(r.consistent);
        CHECK(r.full_holds == r.reduced_holds);
      }
    }
  }
  SUBCASE("hypothesis violations are named") {
    try {
      block_sk_reduction_check(CMat::Zero(1, 1), CMat::Constant(1, 1, 1.0),
                               CMat::Constant(1, 1, 2.0), CMat::Zero(1, 1),
                               CMat::Identity(1, 1), CMat::Identity(1, 1));
      FAIL("expected HypothesisViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kHypothesisViolation);
    }
  }
}

TEST_CASE("hypocoercivity positivity") {
  // M*M + (MN)*(MN) = diag(0,1) + diag(1,0) = I.
  CHECK(hypocoercivity_positivity(toy_n(), diag({0.0, 1.0}), {1.0, 1.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hypocoercivity_positivity(diag({kI, -kI}), diag({0.0, 1.0}), {1.0, 1.0}) <
        1e-24);
}
