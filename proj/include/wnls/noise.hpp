#pragma once

// Spatial white noise on the torus and the objects derived from it at a
// mollification scale eps: Y_eps = inverse Laplacian of the mollified noise, its
// gradient, the Wick-renormalized gradient square and the gauge weights e^{+-Y},
// e^{+-2Y}.

#include <cstdint>
#include <string>
#include <string_view>

#include "wnls/spectral.hpp"

namespace wnls {

enum class MollifierKind { kGaussian, kRaisedCosine };

/// Radial Fourier multiplier rho_hat(eps k).
class Mollifier {
 public:
  constexpr explicit Mollifier(MollifierKind kind = MollifierKind::kGaussian) : kind_(kind) {}

  static Mollifier parse(std::string_view name);

  MollifierKind kind() const noexcept { return kind_; }
  std::string name() const;

  /// Symbol at |kappa|: gaussian exp(-kappa^2/2); raised cosine cos^2(pi kappa/4) on [0, 2], else 0.
  double symbol(double kappa) const noexcept;
  /// rho_hat(eps |k|); eps = 0 gives 1.
  double multiplier(double eps, int k1, int k2) const noexcept;

 private:
  MollifierKind kind_;
};

struct NoiseRealization {
  std::uint64_t seed;
  SpectralField xi;

  const TorusGrid& grid() const noexcept { return xi.grid(); }
};

/// Variance of each Fourier coefficient of the noise, E|xi_k|^2 = (2pi)^-2.
inline constexpr double kModeVariance = 1.0 / (kTwoPi * kTwoPi);

/// Deterministic in (seed, n). Half-lattice order: k1 = 0 with k2 > 0, then
/// k1 = 1..n/2-1 with every k2, lexicographically; then the Nyquist row k1 = -n/2
/// for k2 = 0..n/2-1, the corner (-n/2, -n/2) and finally (0, -n/2). Complex
/// modes draw (re, im) with variance 1/(8 pi^2) each; self-conjugate modes draw a
/// single real value of variance 1/(4 pi^2).
NoiseRealization sample_white_noise(std::uint64_t seed, const TorusGrid& grid);

/// Y = inverse Laplacian of xi (zero mean).
SpectralField solve_poisson(const NoiseRealization& noise);

SpectralField mollify(const SpectralField& f, double eps, const Mollifier& rho);

/// Exact grid expectation of the spatial mean of |grad Y_eps|^2:
///   (2pi)^-2 sum_{k != 0} rho_hat(eps k)^2 (k1^2 [k1 != -n/2] + k2^2 [k2 != -n/2]) / |k|^4.
/// Off the Nyquist rows the summand is rho_hat^2 / |k|^2.
double renorm_constant(double eps, const Mollifier& rho, const TorusGrid& grid);

/// True when eps >= 4/n, i.e. the mollifier rather than the grid sets the cutoff.
bool mollifier_resolved(double eps, const TorusGrid& grid) noexcept;

/// Physical grid values of |d1 Y|^2 + |d2 Y|^2 - c_eps.
RealArray wick_gradient_square_values(const SpectralField& y_eps, double c_eps);
SpectralField wick_gradient_square(const SpectralField& y_eps, double c_eps);

struct GaugeWeights {
  RealArray exp_y;
  RealArray exp_neg_y;
  RealArray exp_2y;
  RealArray exp_neg_2y;
  double sup_exp_2y = 1.0;
  double sup_exp_neg_2y = 1.0;
  /// ||e^{2Y}||_inf ||e^{-2Y}||_inf
  double k_eps = 1.0;
};

/// Throws NonPhysical when |Y| > 300 anywhere on the grid.
GaugeWeights gauge_weights(const SpectralField& y_eps);

/// Everything the solver and diagnostics need at one mollification scale.
/// Immutable once built.
class RenormEnvironment {
 public:
  /// Builds from a given Y_eps; xi_eps is recovered as Laplace(Y_eps).
  RenormEnvironment(SpectralField y_eps, double eps, double c_eps);

  const TorusGrid& grid() const noexcept { return y_eps_.grid(); }
  double eps() const noexcept { return eps_; }
  double c_eps() const noexcept { return c_eps_; }
  double k_eps() const noexcept { return weights_.k_eps; }

  const SpectralField& y_eps() const noexcept { return y_eps_; }
  const VectorField& grad_y() const noexcept { return grad_y_; }
  const SpectralField& xi_eps() const noexcept { return xi_eps_; }
  const SpectralField& wick() const noexcept { return wick_; }
  const GaugeWeights& weights() const noexcept { return weights_; }

  const RealArray& y_values() const noexcept { return y_values_; }
  const RealArray& xi_values() const noexcept { return xi_values_; }
  const RealArray& wick_values() const noexcept { return wick_values_; }

 private:
  double eps_;
  double c_eps_;
  SpectralField y_eps_;
  VectorField grad_y_;
  SpectralField xi_eps_;
  SpectralField wick_;
  GaugeWeights weights_;
  RealArray y_values_;
  RealArray xi_values_;
  RealArray wick_values_;
};

/// Mollifies the realization at scale eps and assembles the environment, with
/// C_eps from renorm_constant.
RenormEnvironment build_environment(const NoiseRealization& noise, double eps, const Mollifier& rho);

}  // namespace wnls
