#include "wnls/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "wnls/besov.hpp"
#include "wnls/diagnostics.hpp"

namespace wnls {

bool ExperimentReport::all_passed() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const Table& ExperimentReport::table(const std::string& table_name) const {
  for (const auto& t : tables) {
    if (t.name == table_name) return t;
  }
  throw Error("report " + name + " has no table " + table_name);
}

const RateFit& ExperimentReport::fit(const std::string& fit_name) const {
  for (const auto& f : fits) {
    if (f.name == fit_name) return f.fit;
  }
  throw Error("report " + name + " has no fit " + fit_name);
}

const Verdict& ExperimentReport::verdict(const std::string& criterion) const {
  for (const auto& v : verdicts) {
    if (v.criterion == criterion) return v;
  }
  throw Error("report " + name + " has no verdict " + criterion);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  // Lowest failing index wins so the surfaced error is deterministic.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> dyadic_eps(int k_first, int k_last) {
  std::vector<double> out;
  for (int k = k_first; k <= k_last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

SpectralField smooth_random_field(std::uint64_t seed, const TorusGrid& grid, double l2_norm, int bandwidth) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  auto f = SpectralField::zeros(grid, false);
  const int band = std::min(bandwidth, grid.n() / 2 - 1);
  for (int k1 = -band; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      const double re = normal(engine);
      const double im = normal(engine);
      f.at(k1, k2) = Complex(re, im) / (1.0 + k1 * k1 + k2 * k2);
    }
  }
  const double norm = lp_norm(f, 2.0);
  return (l2_norm / norm) * std::move(f);
}

RenormEnvironment zero_environment(const TorusGrid& grid, double eps) {
  return RenormEnvironment(SpectralField::zeros(grid), eps, 0.0);
}

namespace {

void require_resolved(const std::vector<double>& eps_list, const TorusGrid& grid, bool force) {
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw InvalidConfig("every eps must be > 0");
    if (!force && !mollifier_resolved(eps, grid)) {
      throw UnresolvedMollifier("mollifier unresolved by grid: eps = " + std::to_string(eps) + " < 4/n = " +
                                std::to_string(4.0 / grid.n()));
    }
  }
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool all_positive(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Fits ordinate against eps when every ordinate is positive; otherwise records why not.
bool try_fit(ExperimentReport& report, const std::string& name, const std::vector<double>& eps,
             const std::vector<double>& values, RateModel model = RateModel::kPurePower, double beta = 0.0) {
  if (!all_positive(values) || eps.size() < 2) return false;
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < eps.size(); ++i) points.emplace_back(eps[i], values[i]);
  report.fits.push_back({name, fit_log_rate(points, model, beta)});
  return true;
}

bool has_fit(const ExperimentReport& report, const std::string& name) {
  return std::any_of(report.fits.begin(), report.fits.end(), [&](const NamedFit& f) { return f.name == name; });
}

nlohmann::ordered_json solver_json(const SolverConfig& c) {
  nlohmann::ordered_json j;
  j["lambda"] = c.lambda;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["snapshot_every"] = c.snapshot_every;
  j["renormalized"] = c.renormalized;
  j["dealias"] = c.dealias;
  j["override_small_data"] = c.override_small_data;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentReport run_convergence(const ConvergenceParams& params) {
  const TorusGrid grid(params.n);
  if (!(params.gamma > 1.0 && params.gamma < 2.0)) throw InvalidConfig("gamma must lie in (1, 2)");
  if (params.eps_list.size() < 2) throw InvalidConfig("convergence needs at least two eps values");
  require_resolved(params.eps_list, grid, params.force || params.zero_noise);

  ExperimentReport report;
  report.name = "convergence";
  report.seeds = {params.seed, params.v0_seed};
  report.parameters["n"] = params.n;
  report.parameters["eps_list"] = params.eps_list;
  report.parameters["gamma"] = params.gamma;
  report.parameters["mollifier"] = params.mollifier.name();
  report.parameters["v0_norm"] = params.v0_norm;
  report.parameters["zero_noise"] = params.zero_noise;
  report.parameters["force"] = params.force;
  report.parameters["solver"] = solver_json(params.solver);

  // One realization, mollified at every scale.
  const auto noise = sample_white_noise(params.seed, grid);
  const auto v0 = smooth_random_field(params.v0_seed, grid, params.v0_norm);
  const double v0_l2 = lp_norm(v0, 2.0);
  const double v0_h2 = sobolev_norm(v0, 2.0);

  const std::size_t count = params.eps_list.size();
  std::vector<std::vector<SpectralField>> v_snapshots(count);
  std::vector<double> times;
  std::vector<double> c_eps(count), k_eps(count), gate_lhs(count), sup_h2(count);

  parallel_for(count, [&](std::size_t i) {
    const double eps = params.eps_list[i];
    const auto env =
        params.zero_noise ? zero_environment(grid, eps) : build_environment(noise, eps, params.mollifier);
    c_eps[i] = env.c_eps();
    k_eps[i] = env.k_eps();
    gate_lhs[i] = check_small_data(v0, env, params.solver.lambda).lhs;
    const auto traj = integrate(gauge_to_u(v0, env), env, params.solver);
    std::vector<SpectralField> vs;
    vs.reserve(traj.snapshots.size());
    double h2 = 0.0;
    for (const auto& u : traj.snapshots) {
      vs.push_back(gauge_to_v(u, env));
      h2 = std::max(h2, sobolev_norm(vs.back(), 2.0));
    }
    sup_h2[i] = h2;
    v_snapshots[i] = std::move(vs);
    if (i == 0) times = traj.times;
  });

  Table envs{"environments", {"eps", "C_eps", "K_eps", "gate_lhs"}, {}};
  for (std::size_t i = 0; i < count; ++i) envs.rows.push_back({params.eps_list[i], c_eps[i], k_eps[i], gate_lhs[i]});
  report.tables.push_back(envs);

  Table cauchy{"cauchy", {"eps_k", "eps_k1", "D_k"}, {}};
  std::vector<double> d_values;
  std::vector<double> d_eps;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    double d = 0.0;
    for (std::size_t t = 0; t < v_snapshots[i].size(); ++t) {
      d = std::max(d, sobolev_norm(v_snapshots[i + 1][t] - v_snapshots[i][t], params.gamma));
    }
    cauchy.rows.push_back({params.eps_list[i], params.eps_list[i + 1], d});
    d_values.push_back(d);
    d_eps.push_back(params.eps_list[i]);
  }
  report.tables.push_back(cauchy);

  Table growth{"h2_growth", {"eps", "sup_h2_v", "ratio"}, {}};
  std::vector<double> ratios;
  for (std::size_t i = 0; i < count; ++i) {
    const double log_eps = std::abs(std::log(params.eps_list[i]));
    const double ratio = sup_h2[i] / (v0_h2 + v0_l2 * log_eps * log_eps);
    growth.rows.push_back({params.eps_list[i], sup_h2[i], ratio});
    ratios.push_back(ratio);
  }
  report.tables.push_back(growth);

  Table snapshot_times{"snapshot_times", {"t"}, {}};
  for (double t : times) snapshot_times.rows.push_back({t});
  report.tables.push_back(snapshot_times);

  const bool decreasing = strictly_decreasing(d_values);
  report.verdicts.push_back({"cauchy-strictly-decreasing", decreasing, decreasing ? "D_k strictly decreasing"
                                                                                   : "D_k not strictly decreasing"});
  if (try_fit(report, "cauchy-rate", d_eps, d_values)) {
    const auto& f = report.fit("cauchy-rate");
    report.verdicts.push_back({"cauchy-positive-slope", f.slope > 0.0, "slope " + fmt(f.slope)});
  } else {
    report.verdicts.push_back({"cauchy-positive-slope", false, "some D_k = 0; no rate to fit"});
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const bool bounded = *lo > 0.0 && *hi / *lo <= 10.0;
  report.verdicts.push_back({"h2-growth-bounded", bounded, "max/min " + fmt(*lo > 0.0 ? *hi / *lo : kInf)});
  return report;
}

ExperimentReport run_convergence_median(const ConvergenceParams& params, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw InvalidConfig("seeds: at least one seed is required");
  ExperimentReport report;
  report.name = "convergence-median";
  report.seeds = seeds;

  Table by_seed{"cauchy_by_seed", {"seed", "eps_k", "eps_k1", "D_k"}, {}};
  std::vector<std::vector<double>> d_per_pair;
  std::vector<double> d_eps;
  std::vector<double> d_next;
  for (std::uint64_t seed : seeds) {
    auto p = params;
    p.seed = seed;
    const auto single = run_convergence(p);
    if (report.parameters.is_null()) {
      report.parameters = single.parameters;
      report.parameters["seeds"] = seeds;
    }
    const auto& rows = single.table("cauchy").rows;
    d_per_pair.resize(rows.size());
    d_eps.resize(rows.size());
    d_next.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      by_seed.rows.push_back({static_cast<double>(seed), rows[i][0], rows[i][1], rows[i][2]});
      d_per_pair[i].push_back(rows[i][2]);
      d_eps[i] = rows[i][0];
      d_next[i] = rows[i][1];
    }
  }
  report.tables.push_back(by_seed);

  Table median{"cauchy_median", {"eps_k", "eps_k1", "median_D_k"}, {}};
  std::vector<double> d_median;
  for (std::size_t i = 0; i < d_per_pair.size(); ++i) {
    auto d = d_per_pair[i];
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    d_median.push_back(m % 2 == 1 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]));
    median.rows.push_back({d_eps[i], d_next[i], d_median.back()});
  }
  report.tables.push_back(median);

  const bool decreasing = strictly_decreasing(d_median);
  report.verdicts.push_back({"median-strictly-decreasing", decreasing,
                             decreasing ? "median D_k strictly decreasing" : "median D_k not strictly decreasing"});
  if (try_fit(report, "median-cauchy-rate", d_eps, d_median)) {
    const auto& f = report.fit("median-cauchy-rate");
    report.verdicts.push_back({"median-positive-slope", f.slope > 0.0, "slope " + fmt(f.slope)});
  } else {
    report.verdicts.push_back({"median-positive-slope", false, "some median D_k = 0; no rate to fit"});
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_phase_check(const PhaseCheckParams& params) {
  const TorusGrid grid(params.n);
  ExperimentReport report;
  report.name = "phase-check";
  report.seeds = {params.seed, params.v0_seed};
  report.parameters["n"] = params.n;
  report.parameters["eps"] = params.eps;
  report.parameters["mollifier"] = params.mollifier.name();
  report.parameters["v0_norm"] = params.v0_norm;
  report.parameters["zero_noise"] = params.zero_noise;
  report.parameters["solver"] = solver_json(params.solver);

  const auto env = params.zero_noise
                       ? zero_environment(grid, params.eps)
                       : build_environment(sample_white_noise(params.seed, grid), params.eps, params.mollifier);
  const auto u0 = gauge_to_u(smooth_random_field(params.v0_seed, grid, params.v0_norm), env);

  auto ren_config = params.solver;
  ren_config.renormalized = true;
  auto unren_config = params.solver;
  unren_config.renormalized = false;
  const auto ren = integrate(u0, env, ren_config);
  const auto unren = integrate(u0, env, unren_config);

  const double u0_norm = lp_norm(u0, 2.0);
  Table table{"phase_defect", {"t", "R"}, {}};
  double sup_r = 0.0;
  for (std::size_t i = 0; i < ren.snapshots.size(); ++i) {
    const double t = ren.times[i];
    const auto rotated = std::polar(1.0, env.c_eps() * t) * unren.snapshots[i];
    const double r = lp_norm(ren.snapshots[i] - rotated, 2.0) / u0_norm;
    table.rows.push_back({t, r});
    sup_r = std::max(sup_r, r);
  }
  report.parameters["C_eps"] = env.c_eps();
  report.tables.push_back(table);
  report.verdicts.push_back({"phase-identity", sup_r <= 1e-10, "sup R = " + fmt(sup_r)});
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_mc_regularity(const RegularityParams& params) {
  const TorusGrid grid(params.n);
  if (params.samples < 100) throw InvalidConfig("M must be >= 100");
  if (!(params.kappa_prime <= 1.0 && params.kappa_prime > params.kappa && params.kappa > 0.0)) {
    throw InvalidConfig("need 1 >= kappa_prime > kappa > 0");
  }
  require_resolved(params.eps_list, grid, true);

  ExperimentReport report;
  report.name = "mc-regularity";
  report.seeds = {params.first_seed};
  report.parameters["M"] = params.samples;
  report.parameters["n"] = params.n;
  report.parameters["eps_list"] = params.eps_list;
  report.parameters["kappa"] = params.kappa;
  report.parameters["kappa_prime"] = params.kappa_prime;
  report.parameters["mollifier"] = params.mollifier.name();
  report.parameters["zero_noise"] = params.zero_noise;

  const std::size_t n_eps = params.eps_list.size();
  const double smooth_index = 1.0 - params.kappa_prime;
  const double rough_index = -params.kappa_prime;
  const double scale = params.zero_noise ? 0.0 : 1.0;
  const double c_zero = scale * renorm_constant(0.0, params.mollifier, grid);

  // distances[s][e][q] for q = Y, wick, exp(-2Y)
  std::vector<std::vector<std::array<double, 3>>> distances(params.samples,
                                                            std::vector<std::array<double, 3>>(n_eps));
  parallel_for(params.samples, [&](std::size_t s) {
    auto noise = sample_white_noise(params.first_seed + s, grid);
    noise.xi *= scale;
    const auto y = solve_poisson(noise);
    const auto wick0 = wick_gradient_square(y, c_zero);
    const auto w0 = gauge_weights(y);
    for (std::size_t e = 0; e < n_eps; ++e) {
      const double eps = params.eps_list[e];
      const auto y_eps = mollify(y, eps, params.mollifier);
      const double c_eps = scale * renorm_constant(eps, params.mollifier, grid);
      const auto wick = wick_gradient_square(y_eps, c_eps);
      const auto we = gauge_weights(y_eps);
      RealArray exp_diff(grid.size());
      for (std::size_t i = 0; i < exp_diff.size(); ++i) exp_diff[i] = we.exp_neg_2y[i] - w0.exp_neg_2y[i];

      distances[s][e][0] = besov_norm(y_eps - y, smooth_index, kInf, kInf);
      distances[s][e][1] = besov_norm(wick - wick0, rough_index, kInf, kInf);
      distances[s][e][2] = besov_norm(to_spectral(grid, exp_diff), smooth_index, kInf, kInf);
    }
  });

  const std::array<std::string, 3> names = {"Y", "wick", "exp_neg_2Y"};
  Table table{"moments",
              {"eps", "E_d2_Y", "E_d4_Y", "E_d2_wick", "E_d4_wick", "E_d2_exp_neg_2Y", "E_d4_exp_neg_2Y"},
              {}};
  std::array<std::vector<double>, 3> second;
  for (std::size_t e = 0; e < n_eps; ++e) {
    std::vector<double> row{params.eps_list[e]};
    for (std::size_t q = 0; q < 3; ++q) {
      double m2 = 0.0;
      double m4 = 0.0;
      for (std::size_t s = 0; s < params.samples; ++s) {
        const double d = distances[s][e][q];
        m2 += d * d;
        m4 += d * d * d * d;
      }
      m2 /= static_cast<double>(params.samples);
      m4 /= static_cast<double>(params.samples);
      row.push_back(m2);
      row.push_back(m4);
      second[q].push_back(m2);
    }
    table.rows.push_back(row);
  }
  report.tables.push_back(table);

  for (std::size_t q = 0; q < 3; ++q) {
    const std::string fit_name = "second-moment-" + names[q];
    if (try_fit(report, fit_name, params.eps_list, second[q])) {
      const auto& f = report.fit(fit_name);
      const bool ok = f.slope > 0.0 && f.r_squared >= 0.9;
      report.verdicts.push_back(
          {"decay-" + names[q], ok, "slope " + fmt(f.slope) + ", R^2 " + fmt(f.r_squared)});
    } else {
      report.verdicts.push_back({"decay-" + names[q], false, "zero moments; no rate to fit"});
    }
    // Moment curves must shrink along with eps.
    std::vector<double> by_decreasing_eps = second[q];
    std::vector<std::size_t> order(n_eps);
    for (std::size_t i = 0; i < n_eps; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return params.eps_list[a] > params.eps_list[b]; });
    for (std::size_t i = 0; i < n_eps; ++i) by_decreasing_eps[i] = second[q][order[i]];
    const bool monotone = strictly_decreasing(by_decreasing_eps);
    report.verdicts.push_back({"monotone-" + names[q], monotone,
                               monotone ? "moments decrease with eps" : "moments not monotone in eps"});
  }
  if (has_fit(report, "second-moment-Y") && has_fit(report, "second-moment-wick")) {
    const double sy = report.fit("second-moment-Y").slope;
    const double sw = report.fit("second-moment-wick").slope;
    report.verdicts.push_back({"wick-slower-than-Y", sw > 0.0 && sw < sy, "wick " + fmt(sw) + ", Y " + fmt(sy)});
  } else {
    report.verdicts.push_back({"wick-slower-than-Y", false, "missing fits"});
  }
  return report;
}

// ---------------------------------------------------------------------------

GradientMoments gradient_moments(const SpectralField& y_eps, double c_eps) {
  const auto d1 = to_physical(derivative(y_eps, Axis::kX1));
  const auto d2 = to_physical(derivative(y_eps, Axis::kX2));
  GradientMoments m;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const double g = std::norm(d1[i]) + std::norm(d2[i]);
    const double w = g - c_eps;
    m.grad_l4_4 += g * g;
    m.wick_l4_4 += w * w * w * w;
  }
  const double area = y_eps.grid().cell_area();
  m.grad_l4_4 *= area;
  m.wick_l4_4 *= area;
  return m;
}

MomentRatioOracle gaussian_moment_ratio_oracle(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  double fourth = 0.0;
  double centered = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = component(engine);
    const double b = component(engine);
    const double sq = a * a + b * b;
    fourth += sq * sq;
    centered += std::pow(sq - 1.0, 4);
  }
  const double area = kTwoPi * kTwoPi;
  return {area * fourth / static_cast<double>(samples), area * centered / static_cast<double>(samples)};
}

ExperimentReport run_mc_moments(const MomentsParams& params) {
  const TorusGrid grid(params.n);
  if (params.samples < 100) throw InvalidConfig("M must be >= 100");
  require_resolved(params.eps_list, grid, true);

  ExperimentReport report;
  report.name = "mc-moments";
  report.seeds = {params.first_seed};
  report.parameters["M"] = params.samples;
  report.parameters["n"] = params.n;
  report.parameters["eps_list"] = params.eps_list;
  report.parameters["mollifier"] = params.mollifier.name();
  report.parameters["oracle_grad_ratio"] = params.expected.grad_ratio;
  report.parameters["oracle_wick_ratio"] = params.expected.wick_ratio;
  report.parameters["nominal_grad_prefactor"] = 12.0 * kPi * kPi;
  report.parameters["nominal_wick_prefactor"] = 51.0 * kPi;

  const std::size_t n_eps = params.eps_list.size();
  std::vector<double> c_eps(n_eps);
  for (std::size_t e = 0; e < n_eps; ++e) c_eps[e] = renorm_constant(params.eps_list[e], params.mollifier, grid);

  std::vector<std::vector<GradientMoments>> per_sample(params.samples, std::vector<GradientMoments>(n_eps));
  parallel_for(params.samples, [&](std::size_t s) {
    const auto y = solve_poisson(sample_white_noise(params.first_seed + s, grid));
    for (std::size_t e = 0; e < n_eps; ++e) {
      per_sample[s][e] = gradient_moments(mollify(y, params.eps_list[e], params.mollifier), c_eps[e]);
    }
  });

  Table table{"moments", {"eps", "C_eps", "m2", "m4", "m2_over_C2", "m4_over_C4"}, {}};
  std::vector<double> m2(n_eps), grad_ratio(n_eps), wick_ratio(n_eps);
  for (std::size_t e = 0; e < n_eps; ++e) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t s = 0; s < params.samples; ++s) {
      a += per_sample[s][e].grad_l4_4;
      b += per_sample[s][e].wick_l4_4;
    }
    a /= static_cast<double>(params.samples);
    b /= static_cast<double>(params.samples);
    m2[e] = a;
    grad_ratio[e] = a / (c_eps[e] * c_eps[e]);
    wick_ratio[e] = b / std::pow(c_eps[e], 4);
    table.rows.push_back({params.eps_list[e], c_eps[e], a, b, grad_ratio[e], wick_ratio[e]});
  }
  report.tables.push_back(table);

  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo : kInf;
  };
  auto worst_rel = [](const std::vector<double>& v, double expected) {
    double w = 0.0;
    for (double x : v) w = std::max(w, std::abs(x / expected - 1.0));
    return w;
  };

  const double grad_spread = spread(grad_ratio);
  const double wick_spread = spread(wick_ratio);
  report.verdicts.push_back({"grad-ratio-stable", grad_spread <= 1.25, "max/min " + fmt(grad_spread)});
  report.verdicts.push_back({"wick-ratio-stable", wick_spread <= 1.25, "max/min " + fmt(wick_spread)});
  if (params.expected.grad_ratio > 0.0) {
    const double w = worst_rel(grad_ratio, params.expected.grad_ratio);
    report.verdicts.push_back({"grad-ratio-matches-oracle", w <= params.grad_tolerance, "worst rel. dev. " + fmt(w)});
  }
  if (params.expected.wick_ratio > 0.0) {
    const double w = worst_rel(wick_ratio, params.expected.wick_ratio);
    report.verdicts.push_back({"wick-ratio-matches-oracle", w <= params.wick_tolerance, "worst rel. dev. " + fmt(w)});
  }
  if (try_fit(report, "grad-log-squared", params.eps_list, m2, RateModel::kPowerTimesLog, 2.0)) {
    const auto& f = report.fit("grad-log-squared");
    report.verdicts.push_back({"grad-log-squared-growth", f.r_squared >= 0.95, "R^2 " + fmt(f.r_squared)});
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_wick_centering(const WickCenteringParams& params) {
  const TorusGrid grid(params.n);
  ExperimentReport report;
  report.name = "wick-centering";
  report.seeds = {params.first_seed};
  report.parameters["M"] = params.samples;
  report.parameters["n"] = params.n;
  report.parameters["eps"] = params.eps;
  report.parameters["mollifier"] = params.mollifier.name();

  const double c_eps = renorm_constant(params.eps, params.mollifier, grid);
  std::vector<double> means(params.samples);
  parallel_for(params.samples, [&](std::size_t s) {
    const auto y = solve_poisson(sample_white_noise(params.first_seed + s, grid));
    const auto values = wick_gradient_square_values(mollify(y, params.eps, params.mollifier), c_eps);
    double sum = 0.0;
    for (double x : values) sum += x;
    means[s] = sum / static_cast<double>(values.size());
  });

  const double m = static_cast<double>(params.samples);
  double mean = 0.0;
  for (double x : means) mean += x;
  mean /= m;
  double var = 0.0;
  for (double x : means) var += (x - mean) * (x - mean);
  const double std_dev = std::sqrt(var / (m - 1.0));
  const double bound = 5.0 * std_dev / std::sqrt(m);

  report.tables.push_back({"summary", {"C_eps", "mean", "sample_std", "bound"}, {{c_eps, mean, std_dev, bound}}});
  report.verdicts.push_back(
      {"wick-centered", std::abs(mean) <= bound, "|mean| " + fmt(std::abs(mean)) + " vs bound " + fmt(bound)});
  return report;
}

ExperimentReport run_renorm_growth(const RenormGrowthParams& params) {
  const TorusGrid grid(params.n);
  ExperimentReport report;
  report.name = "renorm-growth";
  report.parameters["n"] = params.n;
  report.parameters["eps_list"] = params.eps_list;
  report.parameters["mollifier"] = params.mollifier.name();

  Table table{"renorm_constant", {"eps", "abs_log_eps", "C_eps"}, {}};
  std::vector<double> x;
  std::vector<double> y;
  for (double eps : params.eps_list) {
    const double c = renorm_constant(eps, params.mollifier, grid);
    x.push_back(std::abs(std::log(eps)));
    y.push_back(c);
    table.rows.push_back({eps, x.back(), c});
  }
  report.tables.push_back(table);
  const auto line = fit_linear(x, y);
  report.parameters["slope"] = line.slope;
  report.parameters["intercept"] = line.intercept;
  report.parameters["r_squared"] = line.r_squared;
  report.verdicts.push_back({"log-divergence", line.r_squared >= 0.99 && line.slope > 0.0,
                             "slope " + fmt(line.slope) + ", R^2 " + fmt(line.r_squared)});
  return report;
}

}  // namespace wnls
