#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wnls/experiments.hpp"
#include "wnls/io.hpp"

using namespace wnls;

TEST_CASE("parallel_for covers every index and surfaces the first error") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_for(50, [](std::size_t i) {
      if (i == 17 || i == 33) throw std::runtime_error("index " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "index 17");
  }
}

TEST_CASE("dyadic scales") {
  CHECK(dyadic_eps(2, 4) == std::vector<double>{0.25, 0.125, 0.0625});
}

TEST_CASE("smooth random field has the requested norm and band") {
  const TorusGrid g(32);
  const auto f = smooth_random_field(3, g, 0.5);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(f.at(5, 0) == Complex(0.0, 0.0));
  CHECK(std::abs(f.at(4, -4)) > 0.0);
}

TEST_CASE("convergence without noise gives identical runs") {
  ConvergenceParams p;
  p.n = 32;
  p.eps_list = {0.25, 0.125};
  p.solver = SolverConfig{.lambda = -1, .dt = 1e-2, .t_end = 0.2, .snapshot_every = 5};
  p.zero_noise = true;
  const auto report = run_convergence(p);
  for (const auto& row : report.table("cauchy").rows) CHECK(row.back() == 0.0);
}

TEST_CASE("convergence preconditions") {
  ConvergenceParams p;
  p.n = 32;
  p.eps_list = {0.25, 0.0625};
  p.solver = SolverConfig{.lambda = 0, .dt = 1e-2, .t_end = 0.1};
  CHECK_THROWS_AS(run_convergence(p), UnresolvedMollifier);
  p.eps_list = {0.25, 0.125};
  p.gamma = 2.0;
  CHECK_THROWS_AS(run_convergence(p), InvalidConfig);
}

TEST_CASE("phase check without noise") {
  PhaseCheckParams p;
  p.n = 16;
  p.zero_noise = true;
  p.solver = SolverConfig{.lambda = -1, .dt = 1e-2, .t_end = 0.2, .snapshot_every = 2};
  const auto report = run_phase_check(p);
  for (const auto& row : report.table("phase_defect").rows) CHECK(row.back() == 0.0);
  CHECK(report.verdict("phase-identity").passed);
}

TEST_CASE("regularity distances vanish without noise") {
  RegularityParams p;
  p.samples = 100;
  p.n = 32;
  p.eps_list = {0.25, 0.125};
  p.zero_noise = true;
  const auto report = run_mc_regularity(p);
  for (const auto& row : report.table("moments").rows) {
    for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
  }
  CHECK_FALSE(report.all_passed());
}

TEST_CASE("regularity moments do not depend on the order of the scales") {
  RegularityParams p;
  p.samples = 100;
  p.n = 32;
  p.eps_list = {0.25, 0.125};
  const auto a = run_mc_regularity(p);
  p.eps_list = {0.125, 0.25};
  const auto b = run_mc_regularity(p);
  const auto& ra = a.table("moments").rows;
  const auto& rb = b.table("moments").rows;
  CHECK(ra[0] == rb[1]);
  CHECK(ra[1] == rb[0]);
}

TEST_CASE("moments of a flat field") {
  const TorusGrid g(32);
  const double c = 0.37;
  const auto m = gradient_moments(SpectralField::zeros(g), c);
  CHECK(m.grad_l4_4 == 0.0);
  CHECK(m.wick_l4_4 == doctest::Approx(std::pow(c, 4) * kTwoPi * kTwoPi).epsilon(1e-14));
}

TEST_CASE("reports are reproducible") {
  MomentsParams p;
  p.samples = 100;
  p.n = 32;
  p.eps_list = {0.25, 0.125};
  p.expected = gaussian_moment_ratio_oracle(10000, 1);
  CHECK(render_report(run_mc_moments(p)) == render_report(run_mc_moments(p)));

  WickCenteringParams w;
  w.samples = 100;
  w.n = 32;
  w.eps = 0.25;
  CHECK(render_report(run_wick_centering(w)) == render_report(run_wick_centering(w)));
}

TEST_CASE("renormalization growth report") {
  RenormGrowthParams p;
  p.n = 128;
  p.eps_list = dyadic_eps(2, 5);
  const auto report = run_renorm_growth(p);
  CHECK(report.verdict("log-divergence").passed);
  const auto& rows = report.table("renorm_constant").rows;
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] > rows[i - 1][2]);
}

TEST_CASE("median over seeds") {
  ConvergenceParams p;
  p.n = 16;
  p.eps_list = {1.0, 0.5, 0.25};
  p.solver = SolverConfig{.lambda = 0, .dt = 1e-2, .t_end = 0.1, .snapshot_every = 5};
  const auto report = run_convergence_median(p, {3, 1, 2});
  const auto& by_seed = report.table("cauchy_by_seed").rows;
  REQUIRE(by_seed.size() == 6);
  const auto& median = report.table("cauchy_median").rows;
  REQUIRE(median.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> d;
    for (const auto& row : by_seed) {
      if (row[1] == median[i][0]) d.push_back(row[3]);
    }
    std::sort(d.begin(), d.end());
    CHECK(median[i][2] == d[1]);
  }
  p.seed = 2;
  CHECK(run_convergence(p).table("cauchy").rows[0][2] == by_seed[4][3]);
  CHECK_THROWS_AS(run_convergence_median(p, {}), InvalidConfig);
}
