#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pdsys/types.hpp"

namespace pdsys {

/// Periodic field on the box [0, 2πL)^d stored as Fourier coefficients,
///   u(x) = Σ_k c_k e^{i k·x / L},  physical frequency ξ = k / L.
/// Axis index i stands for k = i when i < N/2 and k = i − N otherwise.
/// Coefficients are component-major; within a component the modes are
/// row-major with axis 0 slowest.
struct SpectralField {
  int d = 1;
  int n_comp = 1;
  std::vector<int> grid;  // per-axis resolution, powers of two
  double box_length = 1.0;
  bool real = true;       // represents a real-valued field
  std::vector<Complex> coeffs;

  static SpectralField zeros(int d, int n_comp, const std::vector<int>& grid,
                             double box_length, bool real = true);
  static SpectralField zeros(int d, int n_comp, int n, double box_length, bool real = true);
  /// Same layout as other, all coefficients zero.
  static SpectralField zeros_like(const SpectralField& other, int n_comp = -1);

  std::size_t modes() const;
  Complex& at(int comp, std::size_t mode) { return coeffs[comp * modes() + mode]; }
  const Complex& at(int comp, std::size_t mode) const { return coeffs[comp * modes() + mode]; }
  Complex* component(int comp) { return coeffs.data() + comp * modes(); }
  const Complex* component(int comp) const { return coeffs.data() + comp * modes(); }

  /// Integer wavevector of a mode.
  std::vector<int> wavevector(std::size_t mode) const;
  /// Physical frequency ξ = k / L.
  Vec frequency(std::size_t mode) const;
  double frequency_norm(std::size_t mode) const;
  /// Index of the mode with wavevector −k (Nyquist entries map to themselves).
  std::size_t mirror(std::size_t mode) const;
  /// |ξ| of the corner of the grid, the largest resolvable frequency.
  double max_frequency() const;

  /// Coefficient vector of all components at one mode.
  CVec mode_vector(std::size_t mode) const;
  void set_mode_vector(std::size_t mode, const CVec& v);

  /// Largest |c_{−k} − conj(c_k)| over all modes and components.
  double hermitian_defect() const;
  /// ‖u‖²_{L²} = (2πL)^d Σ |c_k|², all components.
  double l2_norm_squared() const;
  double l2_norm() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Components [first, first + count) as a new field.
SpectralField components(const SpectralField& field, int first, int count);

/// Checks that grids, dimensions, box and component counts match.
void require_same_layout(const SpectralField& a, const SpectralField& b);

/// Values on the uniform grid x_j = 2πL j / N (component-major, row-major).
std::vector<Complex> to_physical(const SpectralField& field);
SpectralField from_physical(const std::vector<Complex>& values, int d, int n_comp,
                            const std::vector<int>& grid, double box_length, bool real);

/// Binary layout, all little-endian:
///   "PDSF" | u32 version | u32 d | u32 n_comp | u32 grid[d] | f64 L |
///   u8 real | f64 (re, im) per coefficient in storage order.
void write_field(const SpectralField& field, const std::filesystem::path& path);
SpectralField read_field(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Initial data presets. Nyquist modes are left at zero.
// ---------------------------------------------------------------------------

/// c_k = amplitude_c at ±k (real fields get the conjugate pair).
SpectralField single_mode_field(int d, int n_comp, int n, double box_length,
                                const std::vector<int>& k, const CVec& amplitude);

/// c_k = amplitude_c · exp(−|ξ|² width² / 2), a real Gaussian of width ~width.
SpectralField gaussian_field(int d, int n_comp, int n, double box_length,
                             double width, const Vec& amplitude);

/// Real random field with independent normal coefficients on
/// xi_lo ≤ |ξ| ≤ xi_hi (xi_lo = 0 keeps the mean), reproducible from seed.
SpectralField random_band_field(int d, int n_comp, int n, double box_length,
                                double xi_lo, double xi_hi, std::uint64_t seed);

}  // namespace pdsys
