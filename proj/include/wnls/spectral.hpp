#pragma once

// Periodic grid on [0, 2pi)^2 and Fourier-space operations on it.
//
// Coefficients follow f(x) = sum_k fhat_k exp(i k.x); the transforms hide the
// FFT normalization so that multipliers (ik, -1/|k|^2, ...) read literally.
// Spectral storage uses FFT slot order: slot a holds the centered wavenumber of
// a mod n, i.e. a for a < n/2 and a - n otherwise.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "wnls/errors.hpp"

namespace wnls {

using Complex = std::complex<double>;
using ComplexArray = std::vector<Complex>;
using RealArray = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class TorusGrid {
 public:
  /// Throws InvalidConfig unless n is even and >= 4.
  explicit TorusGrid(int n);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  double spacing() const noexcept { return kTwoPi / n_; }
  double cell_area() const noexcept { return spacing() * spacing(); }
  double node(int a) const noexcept { return spacing() * a; }

  /// Centered representative in {-n/2, ..., n/2 - 1} of slot a.
  int wavenumber(int slot) const noexcept { return slot < n_ / 2 ? slot : slot - n_; }
  int slot(int k) const noexcept { return ((k % n_) + n_) % n_; }
  int nyquist() const noexcept { return -n_ / 2; }

  std::size_t index(int a, int b) const noexcept {
    return static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b);
  }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n_;
};

enum class Axis { kX1 = 1, kX2 = 2 };

/// Complex scalar field stored by its Fourier coefficients.
class SpectralField {
 public:
  SpectralField(TorusGrid grid, ComplexArray coeffs, bool real_flag = false);

  static SpectralField zeros(TorusGrid grid, bool real_flag = true);
  /// Single Fourier mode amplitude * exp(i k.x).
  static SpectralField mode(TorusGrid grid, int k1, int k2, Complex amplitude = 1.0);

  const TorusGrid& grid() const noexcept { return grid_; }
  int n() const noexcept { return grid_.n(); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  bool real_flag() const noexcept { return real_; }
  void set_real_flag(bool flag) noexcept { real_ = flag; }

  Complex at(int k1, int k2) const { return coeffs_[grid_.index(grid_.slot(k1), grid_.slot(k2))]; }
  Complex& at(int k1, int k2) { return coeffs_[grid_.index(grid_.slot(k1), grid_.slot(k2))]; }

  double max_abs() const noexcept;
  /// max_k |fhat_k - conj(fhat_{-k})|, with -k taken mod n.
  double hermitian_defect() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex scale);

 private:
  TorusGrid grid_;
  ComplexArray coeffs_;
  bool real_;
};

SpectralField operator+(SpectralField lhs, const SpectralField& rhs);
SpectralField operator-(SpectralField lhs, const SpectralField& rhs);
SpectralField operator*(Complex scale, SpectralField f);

struct VectorField {
  SpectralField d1;
  SpectralField d2;

  const TorusGrid& grid() const noexcept { return d1.grid(); }
};

namespace fft {
/// physical[x] = sum_k spectral[k] exp(i k.x). Buffers may alias.
void backward(const TorusGrid& grid, std::span<const Complex> spectral, std::span<Complex> physical);
/// spectral[k] = n^-2 sum_x physical[x] exp(-i k.x). Buffers may alias.
void forward(const TorusGrid& grid, std::span<const Complex> physical, std::span<Complex> spectral);
}  // namespace fft

ComplexArray to_physical(const SpectralField& f);
/// Real part of the physical values; meant for fields carrying the real flag.
RealArray to_physical_real(const SpectralField& f);

SpectralField to_spectral(const TorusGrid& grid, std::span<const Complex> values, bool real_flag = false);
SpectralField to_spectral(const TorusGrid& grid, std::span<const double> values);

/// Spectral derivative; the k_axis = -n/2 row is zeroed.
SpectralField derivative(const SpectralField& f, Axis axis);
VectorField gradient(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);

/// Zero-mean solution g of Laplace(g) = f. Throws NonZeroMean when
/// |fhat_0| > 1e-10 max_k |fhat_k|.
SpectralField inverse_laplacian(const SpectralField& f);

/// True when the mode survives the 2/3 rule, max(|k1|, |k2|) <= n/3.
bool in_dealias_band(const TorusGrid& grid, int k1, int k2) noexcept;
SpectralField dealias(const SpectralField& f);

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g, bool dealias_flag);

/// Equal-weight quadrature ((2pi/n)^2 sum |f|^p)^(1/p); p = kInf gives the max over nodes.
double lp_norm(const SpectralField& f, double p);
double lp_norm(const TorusGrid& grid, std::span<const Complex> values, double p);
double lp_norm(const TorusGrid& grid, std::span<const double> values, double p);

/// ((2pi)^2 sum_k (1 + |k|^2)^s |fhat_k|^2)^(1/2).
double sobolev_norm(const SpectralField& f, double s);

}  // namespace wnls
