#pragma once

#include <optional>
#include <vector>

#include "pdsys/symbol.hpp"
#include "pdsys/types.hpp"

namespace pdsys {

enum class SkMethod { kKalman, kEigenvector };

/// Which eigenvalues of N take part in the eigenvector test. The definition
/// asks for λφ + Nφ = 0 with λ real; for N = (S⁰)⁻¹ i Σ Sᵅωₐ the spectrum is
/// purely imaginary, so the literal reading never fires. kAll is the
/// conservative default.
enum class SpectrumFilter { kAll, kReal, kImaginary };

struct SkVerdict {
  bool holds = false;
  int rank = 0;
  /// Singular values of the test matrix built from N/|N| and M/|M|, descending.
  std::vector<double> singular_values;
  /// Unit φ with Mφ ≈ 0 and Nφ ≈ λφ when holds is false.
  std::optional<CVec> witness;
  Complex lambda{0.0, 0.0};
  SkMethod method = SkMethod::kKalman;

  double min_singular_value() const {
    return singular_values.empty() ? 0.0 : singular_values.back();
  }
};

/// Stack [M; MN; …; MN^{n−1}] of size n²×n.
CMat kalman_matrix(const CMat& n_mat, const CMat& m_mat);

/// Kalman rank test. tol is relative to the largest singular value; tol <= 0
/// selects n²·eps·100. N and M are normalized by their spectral norms first,
/// so the verdict does not depend on their scale.
SkVerdict kalman_rank_holds(const CMat& n_mat, const CMat& m_mat, double tol = 0.0);

/// Default relative tolerance of the eigenvector test.
inline constexpr double kEigenvectorTol = 1e-8;

/// Eigenvector test: SK fails iff some eigenvector φ of N has Mφ = 0. For each
/// eigenvalue λ the smallest singular value of [N − λI; M] is compared with
/// tol, which handles repeated eigenvalues and defective N.
SkVerdict sk_eigenvector_check(const CMat& n_mat, const CMat& m_mat,
                               double tol = kEigenvectorTol,
                               SpectrumFilter filter = SpectrumFilter::kAll);

struct SkSphereRow {
  int omega_index = 0;
  Vec omega;
  SkVerdict full;
  SkVerdict reduced;
  bool agree = false;
};

struct SkSphereReport {
  std::vector<SkSphereRow> rows;
  bool pass = false;            // full pair holds at every ω
  bool reduced_agreement = false;
  int failing = 0;
};

/// Kalman test of (N_ω, M_ω) and of the reduced pair (𝐍_ω, 𝐌_ω) at every
/// sampled direction.
SkSphereReport sk_over_sphere(const SymbolicSystem& system, int sphere_count = 0,
                              double tol = 0.0);
SkSphereReport sk_over_sphere(const SymbolicSystem& system,
                              const std::vector<Vec>& directions, double tol = 0.0);

struct BlockReductionResult {
  bool full_holds = false;      // SK(N, M)
  bool reduced_holds = false;   // SK(N₁₁, N₁₂ Q N₂₁)
  bool equivalence_asserted = false;  // M₂₂ invertible
  /// Forward implication always; both directions when M₂₂ is invertible.
  bool consistent = false;
};

/// Checks the block reduction: with M = diag(0, M₂₂), N₂₁* = ±N₁₂ and Q with
/// definite Hermitian part, SK(N, M) ⟹ SK(N₁₁, N₁₂QN₂₁), and the converse
/// holds when M₂₂ is invertible. Throws HypothesisViolation otherwise.
BlockReductionResult block_sk_reduction_check(const CMat& n11, const CMat& n12,
                                              const CMat& n21, const CMat& n22,
                                              const CMat& m22, const CMat& q,
                                              double tol = 0.0);

/// min over unit η of Σ ε_l |M N^l η|², as the squared smallest singular value
/// of the stack [√ε_l M N^l].
double hypocoercivity_positivity(const CMat& n_mat, const CMat& m_mat,
                                 const std::vector<double>& epsilons);

}  // namespace pdsys
