#include "wnls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace wnls {

TorusGrid::TorusGrid(int n) : n_(n) {
  if (n < 4 || n % 2 != 0) {
    throw InvalidConfig("n must be even and >= 4 (got " + std::to_string(n) + ")");
  }
}

// ---------------------------------------------------------------------------
// FFT backend

namespace fft {
namespace {

// The FFTW planner is not thread safe; execution through fftw_execute_dft is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign, bool in_place) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(n, sign, in_place);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t count = static_cast<std::size_t>(n) * n;
    auto* in = fftw_alloc_complex(count);
    auto* out = in_place ? in : fftw_alloc_complex(count);
    fftw_plan plan = fftw_plan_dft_2d(n, n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!in_place) fftw_free(out);
    fftw_free(in);
    if (plan == nullptr) throw Error("FFTW failed to create a plan for n = " + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

void execute(const TorusGrid& grid, int sign, std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != grid.size() || out.size() != grid.size()) {
    throw ShapeMismatch("FFT buffer size does not match the " + std::to_string(grid.n()) + "^2 grid");
  }
  const bool in_place = in.data() == out.data();
  fftw_plan plan = PlanCache::instance().get(grid.n(), sign, in_place);
  // Out-of-place complex transforms leave the input untouched.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void backward(const TorusGrid& grid, std::span<const Complex> spectral, std::span<Complex> physical) {
  execute(grid, FFTW_BACKWARD, spectral, physical);
}

void forward(const TorusGrid& grid, std::span<const Complex> physical, std::span<Complex> spectral) {
  execute(grid, FFTW_FORWARD, physical, spectral);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : spectral) c *= scale;
}

}  // namespace fft

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(TorusGrid grid, ComplexArray coeffs, bool real_flag)
    : grid_(grid), coeffs_(std::move(coeffs)), real_(real_flag) {
  if (coeffs_.size() != grid_.size()) {
    throw ShapeMismatch("coefficient array has " + std::to_string(coeffs_.size()) + " entries, grid needs " +
                        std::to_string(grid_.size()));
  }
}

SpectralField SpectralField::zeros(TorusGrid grid, bool real_flag) {
  return SpectralField(grid, ComplexArray(grid.size()), real_flag);
}

SpectralField SpectralField::mode(TorusGrid grid, int k1, int k2, Complex amplitude) {
  auto f = zeros(grid, false);
  f.at(k1, k2) = amplitude;
  return f;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::hermitian_defect() const noexcept {
  const int n = grid_.n();
  double m = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Complex here = coeffs_[grid_.index(a, b)];
      const Complex mirror = coeffs_[grid_.index((n - a) % n, (n - b) % n)];
      m = std::max(m, std::abs(here - std::conj(mirror)));
    }
  }
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw GridMismatch("adding fields on different grids");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  real_ = real_ && other.real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw GridMismatch("subtracting fields on different grids");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  real_ = real_ && other.real_;
  return *this;
}

SpectralField& SpectralField::operator*=(Complex scale) {
  for (auto& c : coeffs_) c *= scale;
  real_ = real_ && scale.imag() == 0.0;
  return *this;
}

SpectralField operator+(SpectralField lhs, const SpectralField& rhs) { return lhs += rhs; }
SpectralField operator-(SpectralField lhs, const SpectralField& rhs) { return lhs -= rhs; }
SpectralField operator*(Complex scale, SpectralField f) { return f *= scale; }

// ---------------------------------------------------------------------------
// Transforms

ComplexArray to_physical(const SpectralField& f) {
  ComplexArray values(f.grid().size());
  fft::backward(f.grid(), f.coeffs(), values);
  return values;
}

RealArray to_physical_real(const SpectralField& f) {
  const auto values = to_physical(f);
  RealArray out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](Complex c) { return c.real(); });
  return out;
}

SpectralField to_spectral(const TorusGrid& grid, std::span<const Complex> values, bool real_flag) {
  if (values.size() != grid.size()) {
    throw ShapeMismatch("physical array has " + std::to_string(values.size()) + " entries, grid needs " +
                        std::to_string(grid.size()));
  }
  ComplexArray coeffs(grid.size());
  fft::forward(grid, values, coeffs);
  return SpectralField(grid, std::move(coeffs), real_flag);
}

SpectralField to_spectral(const TorusGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw ShapeMismatch("physical array has " + std::to_string(values.size()) + " entries, grid needs " +
                        std::to_string(grid.size()));
  }
  ComplexArray complex_values(values.begin(), values.end());
  return to_spectral(grid, complex_values, true);
}

// ---------------------------------------------------------------------------
// Multipliers

namespace {

template <typename Multiplier>
SpectralField apply_multiplier(const SpectralField& f, bool real_flag, Multiplier&& m) {
  const auto& grid = f.grid();
  const int n = grid.n();
  ComplexArray out(grid.size());
  const auto in = f.coeffs();
  for (int a = 0; a < n; ++a) {
    const int k1 = grid.wavenumber(a);
    for (int b = 0; b < n; ++b) {
      const auto i = grid.index(a, b);
      out[i] = m(k1, grid.wavenumber(b)) * in[i];
    }
  }
  return SpectralField(grid, std::move(out), real_flag);
}

}  // namespace

SpectralField derivative(const SpectralField& f, Axis axis) {
  const int nyquist = f.grid().nyquist();
  return apply_multiplier(f, f.real_flag(), [&](int k1, int k2) {
    const int k = axis == Axis::kX1 ? k1 : k2;
    return k == nyquist ? Complex{} : Complex(0.0, k);
  });
}

VectorField gradient(const SpectralField& f) {
  return VectorField{derivative(f, Axis::kX1), derivative(f, Axis::kX2)};
}

SpectralField laplacian(const SpectralField& f) {
  return apply_multiplier(f, f.real_flag(), [](int k1, int k2) { return Complex(-(k1 * k1 + k2 * k2), 0.0); });
}

SpectralField inverse_laplacian(const SpectralField& f) {
  const double zero_mode = std::abs(f.at(0, 0));
  if (zero_mode > 1e-10 * f.max_abs()) {
    throw NonZeroMean("inverse Laplacian needs a zero-mean input (|fhat_0| = " + std::to_string(zero_mode) + ")");
  }
  return apply_multiplier(f, f.real_flag(), [](int k1, int k2) {
    const int k2sum = k1 * k1 + k2 * k2;
    return k2sum == 0 ? Complex{} : Complex(-1.0 / k2sum, 0.0);
  });
}

bool in_dealias_band(const TorusGrid& grid, int k1, int k2) noexcept {
  // max(|k1|, |k2|) <= n/3 in exact integer arithmetic
  return 3 * std::max(std::abs(k1), std::abs(k2)) <= grid.n();
}

SpectralField dealias(const SpectralField& f) {
  const auto& grid = f.grid();
  return apply_multiplier(f, f.real_flag(),
                          [&](int k1, int k2) { return in_dealias_band(grid, k1, k2) ? 1.0 : 0.0; });
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g, bool dealias_flag) {
  if (!(f.grid() == g.grid())) throw GridMismatch("pointwise product of fields on different grids");
  const auto& grid = f.grid();
  auto fv = dealias_flag ? to_physical(dealias(f)) : to_physical(f);
  const auto gv = dealias_flag ? to_physical(dealias(g)) : to_physical(g);
  for (std::size_t i = 0; i < fv.size(); ++i) fv[i] *= gv[i];
  auto product = to_spectral(grid, fv, f.real_flag() && g.real_flag());
  return dealias_flag ? dealias(product) : product;
}

// ---------------------------------------------------------------------------
// Norms

namespace {

template <typename Range>
double quadrature_norm(const TorusGrid& grid, const Range& values, double p) {
  if (!(p >= 1.0)) throw UnsupportedNorm("Lp norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : values) sum += std::norm(v);
  } else {
    for (const auto& v : values) sum += std::pow(std::abs(v), p);
  }
  return std::pow(grid.cell_area() * sum, 1.0 / p);
}

}  // namespace

double lp_norm(const TorusGrid& grid, std::span<const Complex> values, double p) {
  if (values.size() != grid.size()) throw ShapeMismatch("Lp norm: array size does not match grid");
  return quadrature_norm(grid, values, p);
}

double lp_norm(const TorusGrid& grid, std::span<const double> values, double p) {
  if (values.size() != grid.size()) throw ShapeMismatch("Lp norm: array size does not match grid");
  return quadrature_norm(grid, values, p);
}

double lp_norm(const SpectralField& f, double p) {
  const auto values = to_physical(f);
  return quadrature_norm(f.grid(), values, p);
}

double sobolev_norm(const SpectralField& f, double s) {
  const auto& grid = f.grid();
  const int n = grid.n();
  const auto c = f.coeffs();
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    const int k1 = grid.wavenumber(a);
    for (int b = 0; b < n; ++b) {
      const int k2 = grid.wavenumber(b);
      const double weight = s == 0.0 ? 1.0 : std::pow(1.0 + k1 * k1 + k2 * k2, s);
      sum += weight * std::norm(c[grid.index(a, b)]);
    }
  }
  return kTwoPi * std::sqrt(sum);
}

}  // namespace wnls
