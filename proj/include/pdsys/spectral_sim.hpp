#pragma once

#include <string>
#include <vector>

#include "pdsys/littlewood_paley.hpp"
#include "pdsys/lyapunov.hpp"
#include "pdsys/spectral_field.hpp"
#include "pdsys/symbol.hpp"

namespace pdsys {

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> fields;
};

/// Mode generator K(ξ) = (S̄⁰)⁻¹(iΣS̄ᵅξₐ + ΣȲᵅᵝξₐξᵦ) = ρN_ω + ρ²M_ω.
CMat mode_generator(const FrozenCoefficients& coeffs, const Vec& xi);

/// V̂(t, ξ) = exp(−tK(ξ)) V̂₀(ξ) for every mode. Real data stay real: the
/// mode −k is set to the conjugate of mode k.
Trajectory evolve_linear(const SymbolicSystem& system, const SpectralField& field0,
                         const std::vector<double>& times);

/// Ŵ = iρ⁻¹Z(ω)⁻¹(S₂₁(ω)V̂¹ + S₂₂(ω)V̂²) + V̂² for ξ ≠ 0 and Ŵ(0) = V̂²(0).
/// Returns the n2 components of W.
SpectralField parabolic_mode_field(const SymbolicSystem& system, const SpectralField& field);

/// K = max_ω ‖Z(ω)⁻¹[S₂₁(ω) S₂₂(ω)]‖ over sampled directions, so that
/// ‖W_j‖ ≤ (1 + (4/3)·2^{−j}K)‖V_j‖ for every block j.
double parabolic_multiplier_bound(const SymbolicSystem& system, int sphere_count = 0);

struct ResidualSeries {
  std::vector<double> times;
  std::vector<double> max_abs;  // max over modes of the residual modulus
  double max_overall = 0.0;
};

/// Residual of the W equation
///   S̄⁰₂₂∂ₜŴ + ρ²Z(ω)Ŵ − iρ⁻¹S̄⁰₂₂Z(ω)⁻¹∂ₜ(S₂₁V̂¹ + S₂₂V̂²)
/// with ∂ₜV̂ = −K(ξ)V̂ taken from the mode generator.
ResidualSeries parabolic_residual(const SymbolicSystem& system, const Trajectory& trajectory);

/// Certified weights for the low-frequency functional (full system, b = 2) and
/// the high-frequency one (hyperbolic block, b = 0).
struct FunctionalParams {
  LyapunovParams full;
  LyapunovParams reduced;
};

/// select_epsilons over sampled directions for both systems.
FunctionalParams certify_functional_params(const SymbolicSystem& system,
                                           const std::vector<double>& rho_grid,
                                           int sphere_count = 0);

struct FunctionalRow {
  double time = 0.0;
  double low_v = 0.0;         // ‖V‖^l in Ḃ^{d/2−1}
  double high_v1 = 0.0;       // ‖V¹‖^h in Ḃ^{d/2+1}
  double high_v2 = 0.0;       // ‖V²‖^h in Ḃ^{d/2}
  double high_w = 0.0;        // ‖W‖^h in Ḃ^{d/2}
  double low_decay = 0.0;     // ‖V‖^l in Ḃ^{decay_s}
  double residual = 0.0;      // ‖Ṡ_{j_min}V‖_{L²}
  double functional = 0.0;    // 𝓛̃
};

struct FunctionalOptions {
  int split_j = 0;        // N₀
  double decay_s = 0.0;   // regularity of the low_decay column
};

/// Hybrid norms (r = 1) and the functional
///   𝓛̃ = Σ_{j≤N₀}2^{j(d/2−1)}√𝓛_j^l + Σ_{j>N₀}(2^{j(d/2+1)}√𝓛_j^{1,h} + 2^{jd/2}‖W_j‖_{L²_{S̄⁰₂₂}}),
/// where 𝓛_j^l integrates L_{|ξ|,ω}(V̂_j) and
/// 𝓛_j^{1,h} = ∫S̄⁰₁₁V̂¹_j·V̂¹_j + min(2^j, 2^{−j})𝐈_j.
std::vector<FunctionalRow> functional_time_series(const SymbolicSystem& system,
                                                  const Trajectory& trajectory,
                                                  const FunctionalParams& params,
                                                  const FunctionalOptions& options = {});

struct DecayFit {
  double exponent = 0.0;
  double standard_error = 0.0;
  int points = 0;
};

/// Least-squares slope of log(value) against log(t) over t_lo ≤ t ≤ t_hi.
/// Throws DegenerateWindow with fewer than two usable points or non-positive
/// values in the window.
DecayFit fit_decay_exponent(const std::vector<double>& times,
                            const std::vector<double>& values, double t_lo, double t_hi);

/// D_min = min over sampled ω of (decay rate at ρ)/ρ² for small ρ: the slowest
/// low-frequency diffusion coefficient.
double low_frequency_diffusivity(const SymbolicSystem& system, int sphere_count = 0);

/// Final time of a decay fit: the diffusion length √(D_min·T) equals L/16.
double decay_fit_horizon(const SymbolicSystem& system, double box_length);

}  // namespace pdsys
