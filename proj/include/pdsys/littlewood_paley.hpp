#pragma once

#include <functional>
#include <vector>

#include "pdsys/spectral_field.hpp"

namespace pdsys {

/// Smooth step ψ(t) = g(t) / (g(t) + g(1 − t)) with g(t) = e^{−1/t} for t > 0.
double smooth_step(double t);

/// χ(r) = ψ((4/3 − r) / (4/3 − 3/4)): 1 on |ξ| ≤ 3/4, 0 on |ξ| ≥ 4/3.
double cutoff_chi(double r);
/// φ(r) = χ(r/2) − χ(r), supported in 3/4 ≤ r ≤ 8/3.
double cutoff_phi(double r);

/// Radial cutoffs, callable on |ξ| or on ξ.
struct CutoffPair {
  std::function<double(double)> chi;
  std::function<double(double)> phi;

  double chi_at(const Vec& xi) const { return chi(xi.norm()); }
  double phi_at(const Vec& xi) const { return phi(xi.norm()); }
};

CutoffPair build_cutoffs();

/// Smallest block index kept separately on a box of size 2πL:
/// ceil(log₂(3 / (4L))). Lower blocks go to the residual Ṡ_{j_min}.
int j_min(double box_length);
/// Largest block that meets the grid: 2^{j_max+1}·3/4 ≥ |ξ|_max.
int j_max(const SpectralField& field);

/// Δ̇_j u = φ(2^{−j}D)u. Throws BlockOutOfRange outside [j_min, j_max].
SpectralField dyadic_block(const SpectralField& field, int j);

/// Ṡ_j u = χ(2^{−j}D)u for any j.
SpectralField low_pass(const SpectralField& field, int j);

/// Ṡ_{j_min} u: everything below the first kept block, including the mean.
SpectralField low_frequency_residual(const SpectralField& field);

/// ‖Δ̇_j u‖_{L²} for j = j_min … j_max (index 0 is j_min), all components.
std::vector<double> block_norms(const SpectralField& field);

enum class BesovSum { kSum, kSup };  // r = 1 and r = ∞

struct HybridNorm {
  double low = 0.0;
  double high = 0.0;
  double total = 0.0;
};

/// low = (Σ or sup)_{j_min ≤ j ≤ N₀} 2^{j s_low}‖Δ̇_j u‖, high the same over
/// N₀ < j ≤ j_max with s_high. total = low + high (r = 1) or max (r = ∞).
HybridNorm besov_norm_hybrid(const SpectralField& field, double s_low, double s_high,
                             BesovSum r, int split_j = 0);
/// Same from precomputed block norms (index 0 is block jlo).
HybridNorm besov_norm_hybrid(const std::vector<double>& norms, int jlo, double s_low,
                             double s_high, BesovSum r, int split_j = 0);

struct LowHighSplit {
  SpectralField low;       // Σ_{j_min ≤ j ≤ N₀} Δ̇_j u
  SpectralField high;      // Σ_{j > N₀} Δ̇_j u
  SpectralField residual;  // Ṡ_{j_min} u
};

/// low + high + residual = u.
LowHighSplit low_high_split(const SpectralField& field, int split_j = 0);

}  // namespace pdsys
