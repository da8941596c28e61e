#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pdsys/symbol.hpp"

namespace pdsys {

/// d = 1, n1 = n2 = 1, S⁰ = I₂, S¹ = [[0,1],[1,0]], Y¹¹ = diag(0,1), Ū = 0.
SymbolicSystem make_toy1d();

/// make_toy1d with S¹ = 0: the two components never interact.
SymbolicSystem make_decoupled_toy();

/// n1 = 0, n2 = 1: ∂ₜv − diffusivity·Δv = 0 in d dimensions.
SymbolicSystem make_pure_parabolic(int d = 1, double diffusivity = 1.0);

/// A system whose coefficients do not depend on the state.
SymbolicSystem make_constant_system(std::string name, int n1, int n2, const Mat& s0,
                                    const std::vector<Mat>& s_alpha,
                                    const std::vector<std::vector<Mat>>& y);

struct PressureLaw {
  std::function<double(double)> p;
  std::function<double(double)> dp;
};

/// p(ρ) = coeff·ρ^gamma.
PressureLaw gamma_law(double coeff, double gamma);

/// Barotropic Navier–Stokes in the variables (ρ, u) around (ρ̄, 0):
///   S⁰ = diag(p'(ρ)/ρ, ρI_d),
///   Σ Sᵅξₐ = [[(p'/ρ) u·ξ, p' ξᵀ], [p' ξ, ρ(u·ξ) I_d]],
///   Σ Zᵅᵝξₐξᵦ = μ|ξ|² I_d + (μ + λ) ξ⊗ξ.
/// Throws ParameterViolation unless μ > 0, 2μ + λ > 0 and p'(ρ̄) > 0.
SymbolicSystem make_barotropic_ns(int d, double mu, double lambda,
                                  const PressureLaw& pressure, double rho_ref);

struct Thermodynamics {
  std::function<double(double, double)> p;
  std::function<double(double, double)> p_rho;
  std::function<double(double, double)> p_theta;
  std::function<double(double, double)> e;
  std::function<double(double, double)> e_theta;
};

/// p = ρθ, e = θ.
Thermodynamics ideal_gas();

struct MhdTransport {
  std::function<double(double, double)> mu;
  std::function<double(double, double)> lambda;
  std::function<double(double, double)> k;
  std::function<double(double, double)> sigma;
  double mu0 = 1.0;
};

/// Constant coefficients.
MhdTransport constant_transport(double mu, double lambda, double k, double sigma,
                                double mu0);

/// Reference state (ρ, u, θ, B) = (1, 0, 1, (1, 0, 0)).
Vec mhd_default_state();

/// Heat-conducting compressible MHD in U = (ρ, u, θ, B), d = 3, n1 = 1, n2 = 7.
/// Throws AssumptionGViolation naming the failing inequality at state_ref.
SymbolicSystem make_mhd(const Thermodynamics& thermo, const MhdTransport& transport,
                        const Vec& state_ref);

struct AssumptionGReport {
  std::vector<CheckItem> items;  // G1.p_rho, G1.e_theta, G2.mu, G2.nu, G2.k, G3.sigma
  bool pass = false;
};

/// Evaluates the thermodynamic and transport sign conditions at states
/// (ρ, u, θ, B); the measure of each item is its minimum over the samples.
AssumptionGReport check_assumption_G(const Thermodynamics& thermo,
                                     const MhdTransport& transport,
                                     std::span<const Vec> samples);

using ModelParams = std::map<std::string, double>;

/// Registered keys: "toy1d", "toy1d-decoupled", "parabolic", "ns-baro", "mhd".
std::vector<std::string> model_keys();

/// Builds a registered model; unknown parameter names throw ParameterViolation
/// and unknown keys ModelUnknown.
SymbolicSystem make_model(const std::string& key, const ModelParams& params = {});

}  // namespace pdsys
