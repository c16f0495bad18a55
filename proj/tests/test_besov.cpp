#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "wnls/besov.hpp"

using namespace wnls;
using wnls::testing::random_poly;

TEST_CASE("block index") {
  const TorusGrid g(64);
  CHECK(max_block_index(g) == 5);
  CHECK(block_index(g, 0, 0) == -1);
  CHECK(block_index(g, 1, 0) == 0);
  CHECK(block_index(g, 1, 1) == 0);
  CHECK(block_index(g, 3, 0) == 1);
  CHECK(block_index(g, 4, 0) == 2);
  CHECK(block_index(g, -32, -32) == 5);
  CHECK(max_block_index(TorusGrid(12)) == 3);
}

TEST_CASE("single-mode decompositions") {
  const TorusGrid g(32);
  const auto blocks = lp_block_decompose(SpectralField::mode(g, 3, 0));
  for (int j = blocks.j_min; j <= blocks.j_max(); ++j) {
    CHECK((blocks.block(j).max_abs() > 0.0) == (j == 1));
  }
  const auto flat = lp_block_decompose(SpectralField::mode(g, 0, 0, 2.0));
  for (int j = flat.j_min; j <= flat.j_max(); ++j) CHECK((flat.block(j).max_abs() > 0.0) == (j == -1));
}

TEST_CASE("blocks partition the spectrum") {
  const TorusGrid g(32);
  const auto f = random_poly(3, 16, false).field(g);
  const auto blocks = lp_block_decompose(f);
  auto sum = SpectralField::zeros(g, false);
  for (const auto& b : blocks.blocks) sum += b;
  double err = 0.0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) err = std::max(err, std::abs(sum.coeffs()[i] - f.coeffs()[i]));
  CHECK(err <= 1e-14 * f.max_abs());
}

TEST_CASE("Besov norms of single blocks") {
  const TorusGrid g(32);
  for (double s : {-0.2, 0.0, 0.8, 1.5}) {
    CHECK(besov_norm(SpectralField::mode(g, 3, 0), s, kInf, kInf) == doctest::Approx(std::pow(2.0, s)));
    for (double p : {1.0, 2.0, 4.0}) {
      CHECK(besov_norm(SpectralField::mode(g, 0, 0, -1.5), s, p, 2.0) ==
            doctest::Approx(1.5 * std::pow(kTwoPi, 2.0 / p) * std::pow(2.0, -s)));
    }
    // Single block j = 2: 2^{js} ||f||_{L2}
    auto f = SpectralField::mode(g, 4, 1, Complex(0.3, 0.4));
    f.at(-5, 0) = 0.7;
    CHECK(besov_norm(f, s, 2.0, 2.0) == doctest::Approx(std::pow(2.0, 2 * s) * lp_norm(f, 2.0)));
  }
}

TEST_CASE("unsupported exponents") {
  const TorusGrid g(16);
  const auto f = SpectralField::mode(g, 1, 0);
  CHECK_THROWS_AS(besov_norm(f, 0.0, 3.0, 2.0), UnsupportedNorm);
  CHECK_THROWS_AS(besov_norm(f, 0.0, 2.0, 4.0), UnsupportedNorm);
}

TEST_CASE("Besov norm is homogeneous") {
  const TorusGrid g(32);
  const auto f = random_poly(4, 12, false).field(g);
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    for (double q : {1.0, 2.0, kInf}) {
      CHECK(besov_norm(Complex(-2.5, 0.0) * f, 0.3, p, q) == doctest::Approx(2.5 * besov_norm(f, 0.3, p, q)));
    }
  }
}

TEST_CASE("block weights are monotone in s") {
  const TorusGrid g(32);
  const auto norms = block_lp_norms(random_poly(5, 16, false).field(g), kInf);
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    const double lo = std::pow(2.0, j * 0.2) * norms[i];
    const double hi = std::pow(2.0, j * 0.9) * norms[i];
    if (j >= 0) {
      CHECK(lo <= hi);
    } else {
      CHECK(lo >= hi);
    }
  }
}

TEST_CASE("embedding into B^s_{inf,inf} with a grid constant") {
  // ||Delta_j f||_p <= (2pi)^{2/p} ||Delta_j f||_inf, then l^q of the weights 2^{j(s - s~)}.
  const TorusGrid g(16);
  const double s = 0.2;
  const double s_tilde = 0.7;
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    for (double q : {1.0, 2.0, kInf}) {
      double tail = 0.0;
      for (int j = -1; j <= max_block_index(g); ++j) {
        const double w = std::pow(2.0, j * (s - s_tilde));
        tail = q == kInf ? std::max(tail, w) : tail + std::pow(w, q);
      }
      const double c = (p == kInf ? 1.0 : std::pow(kTwoPi, 2.0 / p)) * (q == kInf ? tail : std::pow(tail, 1.0 / q));

      double basis = 0.0;
      for (int k1 = -8; k1 < 8; ++k1) {
        for (int k2 = -8; k2 < 8; ++k2) {
          const auto e = SpectralField::mode(g, k1, k2);
          basis = std::max(basis, besov_norm(e, s, p, q) / besov_norm(e, s_tilde, kInf, kInf));
        }
      }
      CHECK(basis <= c * (1.0 + 1e-12));
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = random_poly(seed, 7, false).field(g);
        CHECK(besov_norm(f, s, p, q) <= c * besov_norm(f, s_tilde, kInf, kInf) * (1.0 + 1e-12));
      }
    }
  }
}
