#include "pdsys/spectral_field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>

#include "pdsys/error.hpp"
#include "pdsys/fft.hpp"

namespace pdsys {
namespace {

constexpr char kMagic[4] = {'P', 'D', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

int axis_wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

bool has_nyquist(const SpectralField& f, std::size_t mode) {
  for (int a = f.d - 1; a >= 0; --a) {
    const int n = f.grid[a];
    if (static_cast<int>(mode % n) == n / 2) return true;
    mode /= n;
  }
  return false;
}

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error(ErrorCode::kIoError, "truncated field file");
  return value;
}

}  // namespace

SpectralField SpectralField::zeros(int d, int n_comp, const std::vector<int>& grid,
                                   double box_length, bool real) {
  if (d < 1 || n_comp < 1 || static_cast<int>(grid.size()) != d) {
    throw Error(ErrorCode::kShapeMismatch, "invalid field layout");
  }
  for (int n : grid) {
    if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n))) {
      throw Error(ErrorCode::kShapeMismatch, "grid sizes must be powers of two >= 2");
    }
  }
  if (!(box_length > 0.0)) throw Error(ErrorCode::kShapeMismatch, "box length must be positive");
  SpectralField f;
  f.d = d;
  f.n_comp = n_comp;
  f.grid = grid;
  f.box_length = box_length;
  f.real = real;
  f.coeffs.assign(static_cast<std::size_t>(n_comp) * f.modes(), Complex(0.0, 0.0));
  return f;
}

SpectralField SpectralField::zeros(int d, int n_comp, int n, double box_length, bool real) {
  return zeros(d, n_comp, std::vector<int>(static_cast<std::size_t>(d), n), box_length, real);
}

SpectralField SpectralField::zeros_like(const SpectralField& other, int n_comp) {
  return zeros(other.d, n_comp < 0 ? other.n_comp : n_comp, other.grid, other.box_length,
               other.real);
}

std::size_t SpectralField::modes() const {
  std::size_t m = 1;
  for (int n : grid) m *= static_cast<std::size_t>(n);
  return m;
}

std::vector<int> SpectralField::wavevector(std::size_t mode) const {
  std::vector<int> k(static_cast<std::size_t>(d));
  for (int a = d - 1; a >= 0; --a) {
    const int n = grid[a];
    k[a] = axis_wavenumber(static_cast<int>(mode % n), n);
    mode /= n;
  }
  return k;
}

Vec SpectralField::frequency(std::size_t mode) const {
  Vec xi(d);
  for (int a = d - 1; a >= 0; --a) {
    const int n = grid[a];
    xi(a) = axis_wavenumber(static_cast<int>(mode % n), n) / box_length;
    mode /= n;
  }
  return xi;
}

double SpectralField::frequency_norm(std::size_t mode) const {
  double s = 0.0;
  for (int a = d - 1; a >= 0; --a) {
    const int n = grid[a];
    const double k = axis_wavenumber(static_cast<int>(mode % n), n);
    s += k * k;
    mode /= n;
  }
  return std::sqrt(s) / box_length;
}

std::size_t SpectralField::mirror(std::size_t mode) const {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int a = d - 1; a >= 0; --a) {
    const int n = grid[a];
    const int i = static_cast<int>(mode % n);
    mode /= n;
    out += static_cast<std::size_t>((n - i) % n) * stride;
    stride *= static_cast<std::size_t>(n);
  }
  return out;
}

double SpectralField::max_frequency() const {
  double s = 0.0;
  for (int n : grid) s += 0.25 * n * n;
  return std::sqrt(s) / box_length;
}

CVec SpectralField::mode_vector(std::size_t mode) const {
  CVec v(n_comp);
  for (int c = 0; c < n_comp; ++c) v(c) = at(c, mode);
  return v;
}

void SpectralField::set_mode_vector(std::size_t mode, const CVec& v) {
  for (int c = 0; c < n_comp; ++c) at(c, mode) = v(c);
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  const std::size_t m = modes();
  for (int c = 0; c < n_comp; ++c) {
    const Complex* u = component(c);
    for (std::size_t i = 0; i < m; ++i) {
      worst = std::max(worst, std::abs(u[mirror(i)] - std::conj(u[i])));
    }
  }
  return worst;
}

double SpectralField::l2_norm_squared() const {
  double s = 0.0;
  for (const Complex& c : coeffs) s += std::norm(c);
  return std::pow(2.0 * std::numbers::pi * box_length, d) * s;
}

double SpectralField::l2_norm() const { return std::sqrt(l2_norm_squared()); }

void require_same_layout(const SpectralField& a, const SpectralField& b) {
  if (a.d != b.d || a.n_comp != b.n_comp || a.grid != b.grid || a.box_length != b.box_length) {
    throw Error(ErrorCode::kShapeMismatch, "fields have different layouts");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
  real = real && other.real;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_layout(*this, other);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
  real = real && other.real;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField components(const SpectralField& field, int first, int count) {
  if (first < 0 || count < 1 || first + count > field.n_comp) {
    throw Error(ErrorCode::kShapeMismatch, "component range out of bounds");
  }
  SpectralField out = SpectralField::zeros_like(field, count);
  const std::size_t m = field.modes();
  std::copy(field.component(first), field.component(first) + count * m, out.coeffs.begin());
  return out;
}

std::vector<Complex> to_physical(const SpectralField& field) {
  std::vector<Complex> values = field.coeffs;
  const std::size_t m = field.modes();
  for (int c = 0; c < field.n_comp; ++c) fft_inplace(values.data() + c * m, field.grid, +1);
  return values;
}

SpectralField from_physical(const std::vector<Complex>& values, int d, int n_comp,
                            const std::vector<int>& grid, double box_length, bool real) {
  SpectralField f = SpectralField::zeros(d, n_comp, grid, box_length, real);
  if (values.size() != f.coeffs.size()) throw Error(ErrorCode::kShapeMismatch, "value count mismatch");
  f.coeffs = values;
  const std::size_t m = f.modes();
  const double scale = 1.0 / static_cast<double>(m);
  for (int c = 0; c < n_comp; ++c) {
    fft_inplace(f.coeffs.data() + c * m, grid, -1);
    for (std::size_t i = 0; i < m; ++i) f.coeffs[c * m + i] *= scale;
  }
  return f;
}

void write_field(const SpectralField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.d));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.n_comp));
  for (int n : field.grid) put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put<double>(out, field.box_length);
  put<std::uint8_t>(out, field.real ? 1 : 0);
  for (const Complex& c : field.coeffs) {
    put<double>(out, c.real());
    put<double>(out, c.imag());
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

SpectralField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::kIoError, "not a field file: " + path.string());
  }
  if (get<std::uint32_t>(in) != kVersion) throw Error(ErrorCode::kIoError, "unsupported field version");
  const int d = static_cast<int>(get<std::uint32_t>(in));
  const int n_comp = static_cast<int>(get<std::uint32_t>(in));
  if (d < 1 || d > 8 || n_comp < 1 || n_comp > 1024) throw Error(ErrorCode::kIoError, "corrupt header");
  std::vector<int> grid(static_cast<std::size_t>(d));
  for (int& n : grid) n = static_cast<int>(get<std::uint32_t>(in));
  const double box = get<double>(in);
  const bool real = get<std::uint8_t>(in) != 0;
  SpectralField f = SpectralField::zeros(d, n_comp, grid, box, real);
  for (Complex& c : f.coeffs) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    c = Complex(re, im);
  }
  return f;
}

SpectralField single_mode_field(int d, int n_comp, int n, double box_length,
                                const std::vector<int>& k, const CVec& amplitude) {
  SpectralField f = SpectralField::zeros(d, n_comp, n, box_length, true);
  if (static_cast<int>(k.size()) != d || amplitude.size() != n_comp) {
    throw Error(ErrorCode::kShapeMismatch, "wavevector or amplitude size mismatch");
  }
  std::size_t mode = 0;
  for (int a = 0; a < d; ++a) {
    if (std::abs(k[a]) >= n / 2) throw Error(ErrorCode::kShapeMismatch, "wavevector not resolvable");
    mode = mode * n + static_cast<std::size_t>((k[a] + n) % n);
  }
  const std::size_t m = f.mirror(mode);
  for (int c = 0; c < n_comp; ++c) {
    if (m == mode) {
      f.at(c, mode) = amplitude(c).real();
    } else {
      f.at(c, mode) = amplitude(c);
      f.at(c, m) = std::conj(amplitude(c));
    }
  }
  return f;
}

SpectralField gaussian_field(int d, int n_comp, int n, double box_length, double width,
                             const Vec& amplitude) {
  if (amplitude.size() != n_comp) throw Error(ErrorCode::kShapeMismatch, "amplitude size mismatch");
  SpectralField f = SpectralField::zeros(d, n_comp, n, box_length, true);
  const std::size_t modes = f.modes();
  for (std::size_t i = 0; i < modes; ++i) {
    if (has_nyquist(f, i)) continue;
    const double r = f.frequency_norm(i);
    const double g = std::exp(-0.5 * r * r * width * width);
    for (int c = 0; c < n_comp; ++c) f.at(c, i) = amplitude(c) * g;
  }
  return f;
}

SpectralField random_band_field(int d, int n_comp, int n, double box_length, double xi_lo,
                                double xi_hi, std::uint64_t seed) {
  SpectralField f = SpectralField::zeros(d, n_comp, n, box_length, true);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t modes = f.modes();
  for (int c = 0; c < n_comp; ++c) {
    for (std::size_t i = 0; i < modes; ++i) {
      const std::size_t m = f.mirror(i);
      if (m < i || has_nyquist(f, i)) continue;
      const double r = f.frequency_norm(i);
      const double re = normal(rng);
      const double im = normal(rng);
      if (r < xi_lo || r > xi_hi) continue;
      if (m == i) {
        f.at(c, i) = re;
      } else {
        f.at(c, i) = Complex(re, im);
        f.at(c, m) = Complex(re, -im);
      }
    }
  }
  return f;
}

}  // namespace pdsys
