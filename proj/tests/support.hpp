#pragma once

// Test-only oracles. Nothing here goes through the FFT path: trigonometric
// polynomials are evaluated term by term at arbitrary points.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "wnls/spectral.hpp"

namespace wnls::testing {

struct Term {
  int k1;
  int k2;
  Complex c;
};

/// Finite trigonometric polynomial sum_t c_t exp(i k_t.x).
struct TrigPoly {
  std::vector<Term> terms;

  Complex operator()(double x1, double x2) const {
    Complex s = 0.0;
    for (const auto& t : terms) s += t.c * std::polar(1.0, t.k1 * x1 + t.k2 * x2);
    return s;
  }
  Complex d1(double x1, double x2) const {
    Complex s = 0.0;
    for (const auto& t : terms) s += Complex(0.0, t.k1) * t.c * std::polar(1.0, t.k1 * x1 + t.k2 * x2);
    return s;
  }
  Complex d2(double x1, double x2) const {
    Complex s = 0.0;
    for (const auto& t : terms) s += Complex(0.0, t.k2) * t.c * std::polar(1.0, t.k1 * x1 + t.k2 * x2);
    return s;
  }

  SpectralField field(const TorusGrid& grid, bool real_flag = false) const {
    auto f = SpectralField::zeros(grid, real_flag);
    for (const auto& t : terms) f.at(t.k1, t.k2) += t.c;
    return f;
  }
};

/// Random polynomial on max(|k1|, |k2|) <= band. real = true mirrors every
/// coefficient so the function is real valued.
inline TrigPoly random_poly(std::uint64_t seed, int band, bool real, double decay = 0.0) {
  std::mt19937 gen(static_cast<std::mt19937::result_type>(seed));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPoly p;
  for (int k1 = -band; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      const double w = 1.0 / std::pow(1.0 + k1 * k1 + k2 * k2, decay);
      if (!real) {
        p.terms.push_back({k1, k2, w * Complex(u(gen), u(gen))});
        continue;
      }
      // Half lattice, then the mirror image.
      if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
      if (k1 == 0 && k2 == 0) {
        p.terms.push_back({0, 0, Complex(u(gen), 0.0)});
        continue;
      }
      const Complex c = w * Complex(u(gen), u(gen));
      p.terms.push_back({k1, k2, c});
      p.terms.push_back({-k1, -k2, std::conj(c)});
    }
  }
  return p;
}

/// Trapezoid rule of g on an m x m grid of [0, 2pi)^2.
inline double quadrature(int m, const std::function<double(double, double)>& g) {
  const double h = kTwoPi / m;
  double s = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) s += g(h * a, h * b);
  }
  return s * h * h;
}

inline double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// max_k |f_k - g_k| / max_k |g_k|
inline double coeff_error(const SpectralField& f, const SpectralField& g) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    num = std::max(num, std::abs(f.coeffs()[i] - g.coeffs()[i]));
    den = std::max(den, std::abs(g.coeffs()[i]));
  }
  return den == 0.0 ? num : num / den;
}

}  // namespace wnls::testing
