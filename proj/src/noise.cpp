#include "wnls/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wnls {

Mollifier Mollifier::parse(std::string_view name) {
  if (name == "gaussian") return Mollifier(MollifierKind::kGaussian);
  if (name == "raised-cosine") return Mollifier(MollifierKind::kRaisedCosine);
  throw InvalidConfig("mollifier must be \"gaussian\" or \"raised-cosine\" (got \"" + std::string(name) + "\")");
}

std::string Mollifier::name() const {
  return kind_ == MollifierKind::kGaussian ? "gaussian" : "raised-cosine";
}

double Mollifier::symbol(double kappa) const noexcept {
  kappa = std::abs(kappa);
  switch (kind_) {
    case MollifierKind::kGaussian:
      return std::exp(-0.5 * kappa * kappa);
    case MollifierKind::kRaisedCosine:
      if (kappa > 2.0) return 0.0;
      {
        const double c = std::cos(0.25 * kPi * kappa);
        return c * c;
      }
  }
  return 0.0;
}

double Mollifier::multiplier(double eps, int k1, int k2) const noexcept {
  if (eps == 0.0) return 1.0;
  return symbol(eps * std::sqrt(static_cast<double>(k1 * k1 + k2 * k2)));
}

// ---------------------------------------------------------------------------

NoiseRealization sample_white_noise(std::uint64_t seed, const TorusGrid& grid) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> complex_part(0.0, std::sqrt(0.5 * kModeVariance));
  std::normal_distribution<double> self_conjugate(0.0, std::sqrt(kModeVariance));

  auto xi = SpectralField::zeros(grid, true);
  const int half = grid.n() / 2;

  auto draw_pair = [&](int k1, int k2) {
    const double re = complex_part(engine);
    const double im = complex_part(engine);
    xi.at(k1, k2) = Complex(re, im);
    xi.at(-k1, -k2) = Complex(re, -im);
  };
  auto draw_real = [&](int k1, int k2) { xi.at(k1, k2) = Complex(self_conjugate(engine), 0.0); };

  for (int k2 = 1; k2 < half; ++k2) draw_pair(0, k2);
  for (int k1 = 1; k1 < half; ++k1) {
    for (int k2 = -half; k2 < half; ++k2) draw_pair(k1, k2);
  }
  // Nyquist row: (-n/2, k2) pairs with (-n/2, -k2) modulo n.
  draw_real(-half, 0);
  for (int k2 = 1; k2 < half; ++k2) draw_pair(-half, k2);
  draw_real(-half, -half);
  draw_real(0, -half);

  return NoiseRealization{seed, std::move(xi)};
}

SpectralField solve_poisson(const NoiseRealization& noise) { return inverse_laplacian(noise.xi); }

SpectralField mollify(const SpectralField& f, double eps, const Mollifier& rho) {
  if (!(eps >= 0.0)) throw InvalidConfig("mollification scale eps must be >= 0");
  if (eps == 0.0) return f;
  const auto& grid = f.grid();
  const int n = grid.n();
  ComplexArray out(f.coeffs().begin(), f.coeffs().end());
  for (int a = 0; a < n; ++a) {
    const int k1 = grid.wavenumber(a);
    for (int b = 0; b < n; ++b) out[grid.index(a, b)] *= rho.multiplier(eps, k1, grid.wavenumber(b));
  }
  return SpectralField(grid, std::move(out), f.real_flag());
}

double renorm_constant(double eps, const Mollifier& rho, const TorusGrid& grid) {
  const int n = grid.n();
  const int nyquist = grid.nyquist();
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    const int k1 = grid.wavenumber(a);
    for (int b = 0; b < n; ++b) {
      const int k2 = grid.wavenumber(b);
      if (k1 == 0 && k2 == 0) continue;
      const double r = rho.multiplier(eps, k1, k2);
      if (r == 0.0) continue;
      const double k_sq = static_cast<double>(k1 * k1 + k2 * k2);
      const double weight = (k1 == nyquist ? 0.0 : k1 * k1) + (k2 == nyquist ? 0.0 : k2 * k2);
      sum += r * r * weight / (k_sq * k_sq);
    }
  }
  return kModeVariance * sum;
}

bool mollifier_resolved(double eps, const TorusGrid& grid) noexcept { return eps * grid.n() >= 4.0; }

RealArray wick_gradient_square_values(const SpectralField& y_eps, double c_eps) {
  const auto d1 = to_physical(derivative(y_eps, Axis::kX1));
  const auto d2 = to_physical(derivative(y_eps, Axis::kX2));
  RealArray out(d1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(d1[i]) + std::norm(d2[i]) - c_eps;
  return out;
}

SpectralField wick_gradient_square(const SpectralField& y_eps, double c_eps) {
  const auto values = wick_gradient_square_values(y_eps, c_eps);
  return to_spectral(y_eps.grid(), values);
}

GaugeWeights gauge_weights(const SpectralField& y_eps) {
  const auto y = to_physical_real(y_eps);
  GaugeWeights w;
  w.exp_y.resize(y.size());
  w.exp_neg_y.resize(y.size());
  w.exp_2y.resize(y.size());
  w.exp_neg_2y.resize(y.size());
  double sup_pos = 0.0;
  double sup_neg = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(std::abs(y[i]) <= 300.0)) throw NonPhysical("|Y| exceeds 300 on the grid; gauge weights would overflow");
    w.exp_y[i] = std::exp(y[i]);
    w.exp_neg_y[i] = std::exp(-y[i]);
    w.exp_2y[i] = w.exp_y[i] * w.exp_y[i];
    w.exp_neg_2y[i] = w.exp_neg_y[i] * w.exp_neg_y[i];
    sup_pos = std::max(sup_pos, w.exp_2y[i]);
    sup_neg = std::max(sup_neg, w.exp_neg_2y[i]);
  }
  w.sup_exp_2y = sup_pos;
  w.sup_exp_neg_2y = sup_neg;
  w.k_eps = sup_pos * sup_neg;
  return w;
}

// ---------------------------------------------------------------------------

RenormEnvironment::RenormEnvironment(SpectralField y_eps, double eps, double c_eps)
    : eps_(eps),
      c_eps_(c_eps),
      y_eps_(std::move(y_eps)),
      grad_y_(gradient(y_eps_)),
      xi_eps_(laplacian(y_eps_)),
      wick_(SpectralField::zeros(y_eps_.grid())),
      weights_(gauge_weights(y_eps_)),
      y_values_(to_physical_real(y_eps_)),
      xi_values_(to_physical_real(xi_eps_)),
      wick_values_(wick_gradient_square_values(y_eps_, c_eps)) {
  wick_ = to_spectral(grid(), wick_values_);
}

RenormEnvironment build_environment(const NoiseRealization& noise, double eps, const Mollifier& rho) {
  auto y_eps = mollify(solve_poisson(noise), eps, rho);
  return RenormEnvironment(std::move(y_eps), eps, renorm_constant(eps, rho, noise.grid()));
}

}  // namespace wnls
