#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "pdsys/models.hpp"
#include "pdsys/spectral_sim.hpp"

namespace pdsys {

struct NsParams {
  int d = 2;
  double mu = 1.0;
  double lambda = 0.0;
  PressureLaw pressure = gamma_law(1.0, 2.0);
  double rho_ref = 1.0;
};

/// The symmetric linearization of the same model.
SymbolicSystem linearized_ns(const NsParams& params);

struct NonlinearOptions {
  double dt = 1e-3;                // largest time step
  double cfl_max = 0.5;            // (|u| + √p'(ρ))·dt/dx bound
  double blowup_factor = 10.0;     // ‖V(t)‖ > factor·‖V₀‖ aborts
  double bound_factor = 2.0;       // 𝓛̃(t) ≤ factor·𝓛̃(0) is reported
  double small_data = 1.0;         // hybrid norm of V₀ must not exceed this
  int split_j = 0;                 // N₀ of the functional
};

struct NonlinearResult {
  Trajectory trajectory;
  std::vector<FunctionalRow> functional;
  bool bounded = false;
  long steps = 0;
};

/// Pseudo-spectral solver for
///   ∂ₜρ + div(ρu) = 0,
///   ∂ₜu + u·∇u + ∇p(ρ)/ρ = (μΔu + (μ+λ)∇div u)/ρ
/// in the perturbation variables V = (ρ − ρ̄, u). The viscous term with frozen
/// density ρ̄ is implicit, everything else explicit (IMEX ARS(2,2,2)); products
/// are dealiased with the 2/3 rule. Returns the state at the requested times
/// and 𝓛̃ along the run with the weights of the linearized system.
/// Throws CflViolation, BlowupDetected (norm growth beyond blowup_factor or a
/// non-positive density) and ParameterViolation (d ∉ {1, 2} or large data).
NonlinearResult evolve_nonlinear_ns(const NsParams& params, const SpectralField& field0,
                                    const std::vector<double>& times,
                                    const NonlinearOptions& options = {},
                                    const std::optional<FunctionalParams>& weights = std::nullopt);

}  // namespace pdsys
