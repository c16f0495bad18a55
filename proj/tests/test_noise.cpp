#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "wnls/noise.hpp"

using namespace wnls;
using wnls::testing::coeff_error;
using wnls::testing::random_poly;

namespace {

// Y = a cos(x1)
SpectralField cosine(const TorusGrid& g, double a = 1.0) {
  auto y = SpectralField::mode(g, 1, 0, 0.5 * a);
  y.at(-1, 0) = 0.5 * a;
  return y;
}

}  // namespace

TEST_CASE("noise is deterministic in the seed") {
  const TorusGrid g(32);
  const auto a = sample_white_noise(42, g);
  const auto b = sample_white_noise(42, g);
  const auto c = sample_white_noise(43, g);
  for (std::size_t i = 0; i < a.xi.coeffs().size(); ++i) CHECK(a.xi.coeffs()[i] == b.xi.coeffs()[i]);
  CHECK(coeff_error(a.xi, c.xi) > 0.0);
}

TEST_CASE("noise is real and mean free") {
  const TorusGrid g(32);
  const auto noise = sample_white_noise(5, g);
  CHECK(noise.xi.at(0, 0) == Complex(0.0, 0.0));
  CHECK(noise.xi.hermitian_defect() == 0.0);
  CHECK(noise.xi.real_flag());
  double scale = 0.0;
  double imag = 0.0;
  for (const auto& v : to_physical(noise.xi)) {
    scale = std::max(scale, std::abs(v));
    imag = std::max(imag, std::abs(v.imag()));
  }
  CHECK(imag <= 1e-12 * scale);
  // Self-conjugate modes are real.
  for (auto [k1, k2] : {std::pair{-16, 0}, {0, -16}, {-16, -16}}) CHECK(noise.xi.at(k1, k2).imag() == 0.0);
}

TEST_CASE("mollifier symbols") {
  const Mollifier gauss;
  const Mollifier cosine_kind(MollifierKind::kRaisedCosine);
  CHECK(gauss.symbol(0.0) == 1.0);
  CHECK(cosine_kind.symbol(0.0) == 1.0);
  CHECK(gauss.multiplier(1.0, 1, 0) == doctest::Approx(0.6065306597126334));
  CHECK(cosine_kind.symbol(1.0) == doctest::Approx(0.5));
  CHECK(cosine_kind.symbol(2.5) == 0.0);
  CHECK(gauss.multiplier(0.0, 40, 40) == 1.0);
  CHECK(Mollifier::parse("raised-cosine").kind() == MollifierKind::kRaisedCosine);
  CHECK(Mollifier::parse("gaussian").name() == "gaussian");
  CHECK_THROWS_AS(Mollifier::parse("box"), InvalidConfig);
  double prev = 1.0;
  for (double k = 0.0; k < 3.0; k += 0.05) {
    CHECK(cosine_kind.symbol(k) <= prev);
    prev = cosine_kind.symbol(k);
  }
}

TEST_CASE("Poisson solve of a cosine") {
  const TorusGrid g(16);
  const NoiseRealization noise{0, 2.0 * cosine(g)};
  const auto y = solve_poisson(noise);
  CHECK(y.at(1, 0) == Complex(-1.0, 0.0));
  CHECK(y.at(-1, 0) == Complex(-1.0, 0.0));
  CHECK(solve_poisson(NoiseRealization{0, SpectralField::zeros(g)}).max_abs() == 0.0);
}

TEST_CASE("mollify") {
  const TorusGrid g(32);
  const auto f = random_poly(1, 15, true).field(g, true);
  const Mollifier rho;
  CHECK(coeff_error(mollify(f, 0.0, rho), f) == 0.0);
  CHECK_THROWS_AS(mollify(f, -1.0, rho), InvalidConfig);
  CHECK(mollify(f, 0.25, rho).real_flag());
}

TEST_CASE("gaussian multipliers factor across scales") {
  const Mollifier rho;
  const double e1 = 0.125;
  const double e2 = 0.25;
  const double between = std::sqrt(e2 * e2 - e1 * e1);
  for (int k1 = -8; k1 <= 8; ++k1) {
    for (int k2 = -8; k2 <= 8; ++k2) {
      CHECK(rho.multiplier(e2, k1, k2) ==
            doctest::Approx(rho.multiplier(e1, k1, k2) * rho.multiplier(between, k1, k2)).epsilon(1e-14));
    }
  }
}

TEST_CASE("renormalization constant limits") {
  const TorusGrid g(64);
  CHECK(renorm_constant(100.0, Mollifier(MollifierKind::kRaisedCosine), g) == 0.0);
  const Mollifier rho;
  CHECK(renorm_constant(0.125, rho, g) > renorm_constant(0.25, rho, g));
  CHECK(mollifier_resolved(1.0 / 16, g));
  CHECK_FALSE(mollifier_resolved(1.0 / 32, g));
}

TEST_CASE("Wick square of simple fields") {
  const TorusGrid g(16);
  const auto zero = wick_gradient_square_values(SpectralField::zeros(g), 0.7);
  for (double v : zero) CHECK(v == -0.7);

  const auto w = wick_gradient_square_values(cosine(g), 0.0);
  for (int a = 0; a < 16; ++a) {
    const double s = std::sin(g.node(a));
    CHECK(w[g.index(a, 3)] == doctest::Approx(s * s).epsilon(1e-13));
  }
}

TEST_CASE("gauge weights") {
  const TorusGrid g(16);
  const auto flat = gauge_weights(SpectralField::zeros(g));
  CHECK(flat.k_eps == 1.0);
  for (double v : flat.exp_neg_2y) CHECK(v == 1.0);

  const auto w = gauge_weights(cosine(g));
  CHECK(w.k_eps == doctest::Approx(std::exp(4.0)).epsilon(1e-13));

  const auto rough = gauge_weights(random_poly(2, 7, true).field(g, true));
  for (std::size_t i = 0; i < rough.exp_y.size(); ++i) {
    CHECK(rough.exp_y[i] * rough.exp_neg_y[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rough.exp_2y[i] * rough.exp_neg_2y[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauge_weights(cosine(g, 400.0)), NonPhysical);
}

TEST_CASE("environment invariants") {
  const TorusGrid g(64);
  const auto noise = sample_white_noise(9, g);
  const auto env = build_environment(noise, 0.125, Mollifier{});
  CHECK(env.c_eps() == renorm_constant(0.125, Mollifier{}, g));
  CHECK(coeff_error(env.grad_y().d1, derivative(env.y_eps(), Axis::kX1)) == 0.0);
  CHECK(coeff_error(env.grad_y().d2, derivative(env.y_eps(), Axis::kX2)) == 0.0);

  const auto d1 = to_physical_real(env.grad_y().d1);
  const auto d2 = to_physical_real(env.grad_y().d2);
  double scale = 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const double g2 = d1[i] * d1[i] + d2[i] * d2[i];
    scale = std::max(scale, g2);
    defect = std::max(defect, std::abs(env.wick_values()[i] - (g2 - env.c_eps())));
  }
  CHECK(defect <= 1e-12 * scale);
}
