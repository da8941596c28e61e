#include "pdsys/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdsys/error.hpp"

namespace pdsys {
namespace {

constexpr double kInner = 3.0 / 4.0;
constexpr double kOuter = 4.0 / 3.0;

double g(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

SpectralField apply_radial(const SpectralField& field,
                           const std::function<double(double)>& multiplier) {
  SpectralField out = field;
  const std::size_t m = field.modes();
  for (std::size_t i = 0; i < m; ++i) {
    const double w = multiplier(field.frequency_norm(i));
    for (int c = 0; c < field.n_comp; ++c) out.at(c, i) *= w;
  }
  return out;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = g(t);
  const double b = g(1.0 - t);
  return a / (a + b);
}

double cutoff_chi(double r) { return smooth_step((kOuter - r) / (kOuter - kInner)); }

double cutoff_phi(double r) { return cutoff_chi(0.5 * r) - cutoff_chi(r); }

CutoffPair build_cutoffs() { return CutoffPair{cutoff_chi, cutoff_phi}; }

int j_min(double box_length) {
  return static_cast<int>(std::ceil(std::log2(3.0 / (4.0 * box_length))));
}

int j_max(const SpectralField& field) {
  return static_cast<int>(std::ceil(std::log2(4.0 * field.max_frequency() / 3.0))) - 1;
}

SpectralField dyadic_block(const SpectralField& field, int j) {
  if (j < j_min(field.box_length) || j > j_max(field)) {
    throw Error(ErrorCode::kBlockOutOfRange, "block index outside the resolvable range");
  }
  const double scale = std::ldexp(1.0, -j);
  return apply_radial(field, [scale](double r) { return cutoff_phi(scale * r); });
}

SpectralField low_pass(const SpectralField& field, int j) {
  const double scale = std::ldexp(1.0, -j);
  return apply_radial(field, [scale](double r) { return cutoff_chi(scale * r); });
}

SpectralField low_frequency_residual(const SpectralField& field) {
  return low_pass(field, j_min(field.box_length));
}

std::vector<double> block_norms(const SpectralField& field) {
  const int jlo = j_min(field.box_length);
  const int jhi = j_max(field);
  std::vector<double> sums(static_cast<std::size_t>(std::max(0, jhi - jlo + 1)), 0.0);
  const std::size_t m = field.modes();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = field.frequency_norm(i);
    if (r == 0.0) continue;
    double e = 0.0;
    for (int c = 0; c < field.n_comp; ++c) e += std::norm(field.at(c, i));
    if (e == 0.0) continue;
    // φ(2^{−j}r) ≠ 0 only for 3/4 < 2^{−j}r < 8/3.
    const int j0 = static_cast<int>(std::floor(std::log2(r * 3.0 / 8.0)));
    for (int j = j0; j <= j0 + 2; ++j) {
      if (j < jlo || j > jhi) continue;
      const double w = cutoff_phi(std::ldexp(r, -j));
      sums[j - jlo] += w * w * e;
    }
  }
  const double measure = std::pow(2.0 * std::numbers::pi * field.box_length, field.d);
  for (double& s : sums) s = std::sqrt(measure * s);
  return sums;
}

HybridNorm besov_norm_hybrid(const std::vector<double>& norms, int jlo, double s_low,
                             double s_high, BesovSum r, int split_j) {
  HybridNorm out;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const int j = jlo + static_cast<int>(i);
    const bool low = j <= split_j;
    const double term = std::exp2(j * (low ? s_low : s_high)) * norms[i];
    double& acc = low ? out.low : out.high;
    acc = r == BesovSum::kSum ? acc + term : std::max(acc, term);
  }
  out.total = r == BesovSum::kSum ? out.low + out.high : std::max(out.low, out.high);
  return out;
}

HybridNorm besov_norm_hybrid(const SpectralField& field, double s_low, double s_high,
                             BesovSum r, int split_j) {
  return besov_norm_hybrid(block_norms(field), j_min(field.box_length), s_low, s_high, r,
                           split_j);
}

LowHighSplit low_high_split(const SpectralField& field, int split_j) {
  const int jlo = j_min(field.box_length);
  const int boundary = std::max(split_j + 1, jlo);
  const double s_lo = std::ldexp(1.0, -jlo);
  const double s_b = std::ldexp(1.0, -boundary);
  LowHighSplit out;
  out.residual = low_pass(field, jlo);
  out.low = apply_radial(field, [s_lo, s_b](double r) {
    return cutoff_chi(s_b * r) - cutoff_chi(s_lo * r);
  });
  out.high = apply_radial(field, [s_b](double r) { return 1.0 - cutoff_chi(s_b * r); });
  return out;
}

}  // namespace pdsys
