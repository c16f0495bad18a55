#include <cmath>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "wnls/experiments.hpp"
#include "wnls/solver.hpp"

using namespace wnls;
using wnls::testing::coeff_error;
using wnls::testing::random_poly;

namespace {

RenormEnvironment flat_env(int n, double c = 0.0) { return RenormEnvironment(SpectralField::zeros(TorusGrid(n)), 0.1, c); }

RenormEnvironment cosine_env(int n) {
  const TorusGrid g(n);
  auto y = SpectralField::mode(g, 1, 0, 0.5);
  y.at(-1, 0) = 0.5;
  return RenormEnvironment(y, 0.1, 0.0);
}

double rel_l2(const SpectralField& a, const SpectralField& b) { return lp_norm(a - b, 2.0) / lp_norm(b, 2.0); }

}  // namespace

TEST_CASE("small-data check") {
  const auto env = flat_env(16);
  const TorusGrid g(16);
  const auto half = SpectralField::mode(g, 0, 0, 0.5 / kTwoPi);
  auto check = check_small_data(half, env, 1);
  CHECK(check.pass);
  CHECK(check.margin == doctest::Approx(0.5));
  CHECK_FALSE(check_small_data(SpectralField::mode(g, 0, 0, 1.5 / kTwoPi), env, 1).pass);
  CHECK(check_small_data(SpectralField::mode(g, 0, 0, 100.0), env, -1).pass);
}

TEST_CASE("gauge transforms") {
  const TorusGrid g(16);
  const auto u = random_poly(1, 5, false).field(g);
  CHECK(coeff_error(gauge_to_v(u, flat_env(16)), u) < 1e-14);

  const auto env = cosine_env(16);
  const auto v = to_physical(gauge_to_v(SpectralField::mode(g, 0, 0), env));
  for (int a = 0; a < 16; ++a) CHECK(std::abs(v[g.index(a, 2)] - std::exp(std::cos(g.node(a)))) < 1e-13);

  CHECK(coeff_error(gauge_to_u(gauge_to_v(u, env), env), u) < 1e-12);
  const auto uv = to_physical(u);
  const auto vv = to_physical(gauge_to_v(u, env));
  for (std::size_t i = 0; i < uv.size(); ++i) {
    CHECK(std::norm(vv[i]) * env.weights().exp_neg_2y[i] == doctest::Approx(std::norm(uv[i])).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauge_to_v(SpectralField::zeros(TorusGrid(8)), env), GridMismatch);
}

TEST_CASE("pure Laplacian step is exact") {
  const TorusGrid g(16);
  const SolverConfig cfg{.lambda = 0};
  const double dt = 0.01;
  const auto u = SpectralField::mode(g, 1, 0);
  const auto out = strang_step(u, dt, flat_env(16), cfg);
  CHECK(coeff_error(out, SpectralField::mode(g, 1, 0, std::polar(1.0, dt))) <= 1e-12);
}

TEST_CASE("constant field under constant potential") {
  const TorusGrid g(16);
  // V = xi - C = -C with Y = 0.
  const double v0 = -0.8;
  const auto env = flat_env(16, -v0);
  const SolverConfig cfg{.lambda = -1};
  const Complex c(0.6, 0.3);
  const double dt = 0.05;
  const auto out = strang_step(SpectralField::mode(g, 0, 0, c), dt, env, cfg);
  const Complex expected = c * std::polar(1.0, -dt * (-std::norm(c) + v0));
  CHECK(std::abs(out.at(0, 0) - expected) <= 1e-12);
  CHECK(out.max_abs() == doctest::Approx(std::abs(expected)));
}

TEST_CASE("constant shift of the potential is a global phase") {
  const TorusGrid g(32);
  const auto env = build_environment(sample_white_noise(3, g), 0.25, Mollifier{});
  const RenormEnvironment shifted(env.y_eps(), env.eps(), env.c_eps() + 0.37);
  const auto u = smooth_random_field(2, g, 0.8);
  const SolverConfig cfg{.lambda = -1};
  const double dt = 0.01;
  const auto a = strang_step(u, dt, env, cfg);
  const auto b = strang_step(u, dt, shifted, cfg);
  // V - 0.37 gives e^{i 0.37 dt} times the original step.
  CHECK(coeff_error(b, std::polar(1.0, 0.37 * dt) * a) <= 1e-13);
}

TEST_CASE("step is reversible") {
  const TorusGrid g(32);
  const auto env = build_environment(sample_white_noise(4, g), 0.25, Mollifier{});
  const auto u = smooth_random_field(5, g, 0.8);
  const SolverConfig cfg{.lambda = -1, .dealias = false};
  const auto back = strang_step(strang_step(u, 0.01, env, cfg), -0.01, env, cfg);
  CHECK(rel_l2(back, u) <= 1e-10);
}

TEST_CASE("integrate: free evolution of a plane wave") {
  const TorusGrid g(16);
  const SolverConfig cfg{.lambda = 0, .dt = 1e-2, .t_end = 1.0, .snapshot_every = 10};
  const auto traj = integrate(SpectralField::mode(g, 1, 0), flat_env(16), cfg);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.snapshots.size() == 11);
  CHECK(traj.final_time == doctest::Approx(1.0));
  CHECK(coeff_error(traj.final_state, SpectralField::mode(g, 1, 0, std::polar(1.0, 1.0))) <= 1e-10);
}

TEST_CASE("integrate: partial last step and snapshot count") {
  const TorusGrid g(16);
  const SolverConfig cfg{.lambda = 0, .dt = 0.3, .t_end = 1.0, .snapshot_every = 2};
  const auto traj = integrate(SpectralField::mode(g, 2, 1), flat_env(16), cfg);
  CHECK(traj.steps == 4);
  CHECK(traj.final_time == 1.0);
  CHECK(traj.snapshots.size() == 3);
  CHECK(traj.times.back() == 1.0);
  CHECK(coeff_error(traj.final_state, SpectralField::mode(g, 2, 1, std::polar(1.0, 5.0))) <= 1e-12);
}

TEST_CASE("integrate: errors") {
  const TorusGrid g(16);
  const auto env = flat_env(16);
  SolverConfig cfg{.lambda = 1, .dt = 1e-2, .t_end = 0.1};
  const auto big = SpectralField::mode(g, 0, 0, 2.0 / kTwoPi);
  CHECK_THROWS_AS(integrate(big, env, cfg), SmallDataViolation);
  cfg.override_small_data = true;
  CHECK_NOTHROW(integrate(big, env, cfg));

  CHECK_THROWS_AS(integrate(big, env, SolverConfig{.dt = -1.0}), InvalidConfig);
  CHECK_THROWS_AS(integrate(big, env, SolverConfig{.lambda = 2}), InvalidConfig);
  CHECK_THROWS_AS(integrate(big, RenormEnvironment(SpectralField::zeros(g), 0.1, 1e6), SolverConfig{.dt = 0.1}),
                  InvalidConfig);

  auto nan = SpectralField::mode(g, 0, 0, std::numeric_limits<double>::quiet_NaN());
  try {
    integrate(nan, env, SolverConfig{.lambda = -1, .dt = 1e-2, .t_end = 0.1});
    FAIL("expected BlowUp");
  } catch (const BlowUp& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("mass is conserved to roundoff") {
  const TorusGrid g(64);
  const auto env = build_environment(sample_white_noise(11, g), 0.125, Mollifier{});
  const auto u0 = gauge_to_u(smooth_random_field(7, g, 0.5), env);
  const SolverConfig cfg{.lambda = -1, .dt = 1e-3, .t_end = 1.0, .snapshot_every = 50};
  const auto traj = integrate(u0, env, cfg);
  const double m0 = lp_norm(u0, 2.0);
  double worst = 0.0;
  for (const auto& u : traj.snapshots) worst = std::max(worst, std::abs(lp_norm(u, 2.0) - m0) / m0);
  CHECK(worst <= 1e-10);
}

TEST_CASE("defocusing run completes at n = 128, t_end = 2") {
  const TorusGrid g(128);
  const auto env = build_environment(sample_white_noise(12, g), 0.125, Mollifier{});
  const auto u0 = gauge_to_u(smooth_random_field(8, g, 0.5), env);
  const SolverConfig cfg{.lambda = -1, .dt = 2e-3, .t_end = 2.0, .snapshot_every = 100};
  CHECK_NOTHROW(integrate(u0, env, cfg));
}
