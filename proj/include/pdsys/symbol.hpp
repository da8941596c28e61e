#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pdsys/types.hpp"

namespace pdsys {

using MatrixMap = std::function<Mat(const Vec&)>;
using StatePredicate = std::function<bool(const Vec&)>;

/// A symmetric partially diffusive system
///   S⁰(U)∂ₜU + Σ Sᵅ(U)∂ₐU − Σ ∂ₐ(Yᵅᵝ(U)∂ᵦU) = f
/// described by its coefficient maps and a reference state Ū.
/// The first n1 components are the hyperbolic block, the last n2 the
/// diffusive block.
struct SymbolicSystem {
  std::string name;
  int d = 1;
  int n1 = 0;
  int n2 = 0;
  Vec uref;
  MatrixMap s0;
  std::vector<MatrixMap> s_alpha;             // d maps
  std::vector<std::vector<MatrixMap>> y;      // d×d maps
  StatePredicate domain_check;
  bool source_free = true;                    // f ≡ 0

  int n() const { return n1 + n2; }
};

/// Throws ShapeMismatch when dimensions are inconsistent and DomainViolation
/// when Ū lies outside the admissible set.
void validate_shape(const SymbolicSystem& system);

/// Coefficient matrices evaluated at a fixed state.
struct FrozenCoefficients {
  int d = 1;
  int n1 = 0;
  int n2 = 0;
  Mat s0;
  std::vector<Mat> s_alpha;
  std::vector<std::vector<Mat>> y;

  int n() const { return n1 + n2; }
};

FrozenCoefficients freeze(const SymbolicSystem& system);
FrozenCoefficients freeze_at(const SymbolicSystem& system, const Vec& state);

/// Frozen-coefficient symbol data at a unit direction ω.
struct FrequencySymbol {
  Vec omega;
  int n1 = 0;
  int n2 = 0;
  Mat s0;        // S̄⁰
  CMat a_omega;  // i Σ S̄ᵅ ωₐ
  Mat b_omega;   // Σ Ȳᵅᵝ ωₐ ωᵦ
  CMat n_omega;  // (S̄⁰)⁻¹ A_ω
  CMat m_omega;  // (S̄⁰)⁻¹ B_ω
  Mat s21;       // n2×n1
  Mat s22;       // n2×n2
  Mat s12;       // n1×n2
  Mat z_omega;   // n2×n2
  CMat nred;     // i (S̄⁰₁₁)⁻¹ Σ S̄ᵅ₁₁ ωₐ
  CMat mred;     // (S̄⁰₁₁)⁻¹ S₁₂ Z⁻¹ S₂₁

  int n() const { return n1 + n2; }
  Mat s0_11() const { return s0.topLeftCorner(n1, n1); }
  Mat s0_22() const { return s0.bottomRightCorner(n2, n2); }
};

FrequencySymbol evaluate_symbols(const SymbolicSystem& system, const Vec& omega);
FrequencySymbol evaluate_symbols(const FrozenCoefficients& coeffs,
                                 const Vec& omega);

/// Deterministic near-uniform directions on S^{d-1}: {−1, +1} for d = 1,
/// equispaced angles for d = 2, a Fibonacci lattice for d = 3.
/// count = 0 picks the default (2, 64, 256).
std::vector<Vec> sample_sphere(int d, int count = 0);

/// Tensor grid of perturbed states around uref: each coordinate takes
/// {u − δ, u, u + δ} with δ = rel·max(|u|, 1); states failing the domain
/// predicate are dropped.
std::vector<Vec> perturbation_grid(const SymbolicSystem& system,
                                   double rel = 0.1);

// ---------------------------------------------------------------------------
// Structural assumption checks
// ---------------------------------------------------------------------------

struct AssumptionDSample {
  Vec state;
  bool s0_symmetric = false;
  bool s0_positive_definite = false;
  bool s0_block_diagonal = false;
  double s0_min_eigenvalue = 0.0;
  // (α, ‖Sᵅ − ᵀSᵅ‖_max) for every non-symmetric Sᵅ.
  std::vector<std::pair<int, double>> asymmetric_s_alpha;
  bool y_block_form = false;
  double c1 = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

struct AssumptionDReport {
  std::vector<AssumptionDSample> samples;
  double min_c1 = 0.0;
  bool pass = false;
};

struct AssumptionDOptions {
  int sphere_count = 0;    // ξ directions used for the ellipticity constant
  double tol = 1e-10;      // relative tolerance for symmetry and block checks
  double c1_floor = 1e-12; // c₁ must exceed this
};

/// Strong-ellipticity constant at a state: min over sampled unit ξ of the
/// smallest eigenvalue of the symmetric part of Σ Zᵅᵝ ξₐ ξᵦ. The minimum over
/// unit λ is taken exactly through the eigenvalue.
double ellipticity_constant(const FrozenCoefficients& coeffs,
                            int sphere_count = 0);

AssumptionDReport check_assumption_D(const SymbolicSystem& system,
                                     std::span<const Vec> samples,
                                     const AssumptionDOptions& options = {});

struct CheckItem {
  std::string id;
  bool pass = false;
  double measure = 0.0;
  std::string detail;
};

struct ProbeSpec {
  std::vector<Vec> samples;  // empty: Ū and its ±10% one-coordinate perturbations
  double step_rel = 1e-5;    // h = step_rel·(|Ū| + 1)
  double tol = 1e-6;         // first-difference tolerance (relative)
  double affine_tol = 1e-3;  // second-difference tolerance (relative)
};

struct AssumptionEReport {
  std::vector<CheckItem> items;
  bool s0_11_identity = false;
  bool pass = false;

  const CheckItem* find(const std::string& id) const;
};

AssumptionEReport check_assumption_E(const SymbolicSystem& system,
                                     const ProbeSpec& probe = {});

}  // namespace pdsys
