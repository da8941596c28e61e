#pragma once

#include <string>
#include <vector>

#include "pdsys/symbol.hpp"
#include "pdsys/types.hpp"

namespace pdsys {

/// Frequency-wise linear system S ∂ₜv + (ρᵃ 𝒜_ω + ρᵇ ℬ_ω) v = 0 written with
/// n = S⁻¹𝒜_ω and m = S⁻¹ℬ_ω, so that ∂ₜv = −(ρᵃ n + ρᵇ m) v.
struct GeneratorSymbol {
  CMat s;
  CMat n;
  CMat m;
  int a = 1;
  int b = 2;

  Eigen::Index size() const { return s.rows(); }
};

/// (S̄⁰, N_ω, M_ω) with (a, b) = (1, 2).
GeneratorSymbol full_generator(const FrequencySymbol& sym);
/// (S̄⁰₁₁, 𝐍_ω, 𝐌_ω) with (a, b) = (1, 0): the hyperbolic block once the
/// parabolic mode is eliminated.
GeneratorSymbol reduced_generator(const FrequencySymbol& sym);

/// ρᵃ n + ρᵇ m.
CMat generator_matrix(const GeneratorSymbol& g, double rho);

/// Largest κ with Re(ℬη·η) ≥ κ|ℬη|² for all η, where ℬ = S m. Zero when no
/// positive κ works.
double admissible_kappa(const GeneratorSymbol& g);

struct LyapunovParams {
  int a = 1;
  int b = 2;
  double kappa = 1.0;
  std::vector<double> epsilons;   // ε₀ … ε_{n−1}
  double equivalence_C = 0.0;     // H eigenvalues lie in [1/C, C]
  double dissipation_c = 0.0;     // λmin(HK + K*H) ≥ c·rate(ρ)·λmax(H)
  double interaction_C = 0.0;     // constant of the 𝓘_ω derivative bound
  bool certified = false;
};

/// min(1/(κρ^{a−b}), κρ^{a−b}).
double functional_weight(double rho, int a, int b, double kappa);
/// min(ρᵇ/κ, κρ^{2a−b}).
double dissipation_rate_scale(double rho, int a, int b, double kappa);

/// Σ_{k≥1} ε_k ½(P_k*Q_k + Q_k*P_k) with P_k = 𝓜𝓝^{k−1}, Q_k = 𝓜𝓝^k, where
/// 𝓜 = κm and 𝓝 = n: the matrix of the interaction functional 𝓘_ω.
CMat interaction_matrix(const GeneratorSymbol& g, const LyapunovParams& params);

/// Hermitian H with L_{ρ,ω}(v) = v*Hv:
///   H = S + w(ρ)·Σ_{k≥1} ε_k ½(P_k*Q_k + Q_k*P_k),  P_k = 𝓜𝓝^{k−1}, Q_k = 𝓜𝓝^k,
/// where 𝓜 = κm and 𝓝 = n.
CMat lyapunov_matrix(const GeneratorSymbol& g, double rho, const LyapunovParams& params);

/// L_{ρ,ω}(v). Throws NonPositiveRho for ρ ≤ 0.
double lyapunov_value(const CVec& v, double rho, const GeneratorSymbol& g,
                      const LyapunovParams& params);
/// Same with the generator matching params (b = 2: full, b = 0: reduced).
double lyapunov_value(const CVec& v, double rho, const FrequencySymbol& sym,
                      const LyapunovParams& params);

struct FlowRates {
  double observed_rate = 0.0;  // λmin(HK + K*H) / λmax(H)
  double required_rate = 0.0;  // c·min(ρᵇ/κ, κρ^{2a−b})
  double min_eig_h = 0.0;
  double max_eig_h = 0.0;
  double min_eig_d = 0.0;

  bool certified() const { return observed_rate >= required_rate; }
};

FlowRates lyapunov_derivative_along_flow(double rho, const GeneratorSymbol& g,
                                         const LyapunovParams& params);

/// Smallest C with
///   d/dt 𝓘_ω + ½ρᵃ Σ ε_k|𝓜𝓝^k v|² ≤ C ε₀ max(ρᵃ, ρ^{2b−a}/κ²) |𝓜v|²
/// along the flow; infinite when no constant works at this ρ.
double interaction_constant(double rho, const GeneratorSymbol& g,
                            const LyapunovParams& params);

struct Certification {
  bool ok = false;
  double dissipation_c = 0.0;
  double equivalence_C = 0.0;
  double interaction_C = 0.0;
  double worst_rho = 0.0;
  std::string failure;
};

/// Evaluates both inequality families and the equivalence bound for the given
/// weights at every (generator, ρ) pair.
Certification certify(const std::vector<GeneratorSymbol>& gens,
                      const LyapunovParams& params,
                      const std::vector<double>& rho_grid);

/// n log-spaced points over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);
/// 61 points over [1e−3, 1e3].
std::vector<double> default_rho_grid();

/// Weights ε_k = ε₀δᵏ certified on the grid. kappa ≤ 0 selects the admissible
/// κ. Throws SkFails when the pair fails the Kalman test and
/// NoFeasibleEpsilons when no weights certify.
LyapunovParams select_epsilons(const GeneratorSymbol& g, double kappa,
                               const std::vector<double>& rho_grid);
LyapunovParams select_epsilons(const FrequencySymbol& sym, int a, int b, double kappa,
                               const std::vector<double>& rho_grid);
/// One set of weights for every direction; κ ≤ 0 selects the minimum
/// admissible κ over the directions.
LyapunovParams select_epsilons(const std::vector<GeneratorSymbol>& gens, double kappa,
                               const std::vector<double>& rho_grid);

/// min Re λ over the eigenvalues of ρN_ω + ρ²M_ω.
double spectral_decay_rate(const FrequencySymbol& sym, double rho);
double spectral_decay_rate(const SymbolicSystem& system, const Vec& omega, double rho);

struct EnvelopeReport {
  std::vector<double> rho;
  std::vector<double> rate;
  double low_slope = 0.0;
  double high_slope = 0.0;
  double plateau = 0.0;        // rate at the largest ρ
  double crossover_rho = 0.0;  // where the low-frequency power law meets the plateau
};

/// Log–log slopes of the decay rate over the first and last decade of the grid.
/// Throws InsufficientGrid unless the grid spans ≥ 4 decades with ≥ 2 points
/// per tail decade.
EnvelopeReport rate_envelope_fit(const SymbolicSystem& system, const Vec& omega,
                                 const std::vector<double>& rho_grid);

}  // namespace pdsys
