// wnls: command-line front end.
//
// Exit codes: 0 success or all verdicts pass, 1 some verdict failed,
// 2 usage or configuration error, 3 runtime error.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wnls/diagnostics.hpp"
#include "wnls/errors.hpp"
#include "wnls/experiments.hpp"
#include "wnls/io.hpp"
#include "wnls/noise.hpp"
#include "wnls/solver.hpp"

namespace fs = std::filesystem;
using namespace wnls;

namespace {

constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Flags {
  std::string config_path;
  bool force = false;
  std::vector<std::function<void(nlohmann::json&)>> setters;

  nlohmann::json overrides() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& set : setters) set(j);
    if (force) j["force"] = true;
    return j;
  }
};

template <typename T>
void flag(CLI::App* app, Flags& flags, const std::string& name, const std::string& key, const std::string& help) {
  auto value = std::make_shared<T>();
  auto* opt = app->add_option(name, *value, help);
  flags.setters.push_back([opt, value, key](nlohmann::json& j) {
    if (opt->count() > 0) j[key] = *value;
  });
}

void common_flags(CLI::App* app, Flags& flags) {
  const RunConfig d;
  app->add_option("-c,--config", flags.config_path, "JSON config file; flags override its keys");
  app->add_flag("--force", flags.force, "Run with eps < 4/n, or lambda = 1 past the small-data check");
  flag<int>(app, flags, "-n,--n", "n", "Grid points per axis (default " + std::to_string(d.n) + ")");
  flag<std::uint64_t>(app, flags, "--seed", "seed", "Noise seed (default 1)");
  flag<double>(app, flags, "--eps", "eps", "Mollification scale (default 0.125)");
  flag<std::string>(app, flags, "--mollifier", "mollifier", "gaussian | raised-cosine (default gaussian)");
  flag<std::string>(app, flags, "-o,--output-dir", "output_dir", "Output directory (default .)");
}

void solver_flags(CLI::App* app, Flags& flags) {
  flag<int>(app, flags, "--lambda", "lambda", "Nonlinearity sign -1, 0, 1 (default 0)");
  flag<double>(app, flags, "--dt", "dt", "Time step (default 1e-3)");
  flag<double>(app, flags, "--t-end", "t_end", "Final time (default 1)");
  flag<int>(app, flags, "--snapshot-every", "snapshot_every", "Steps between snapshots (default 20)");
  flag<double>(app, flags, "--v0-norm", "v0_norm", "L2 norm of the initial v (default 0.5)");
  flag<std::uint64_t>(app, flags, "--v0-seed", "v0_seed", "Seed of the initial v (default 7)");
  flag<bool>(app, flags, "--renormalized", "renormalized", "Subtract C_eps from the potential (default true)");
  flag<bool>(app, flags, "--dealias", "dealias", "Dealias |u|^2 (default true)");
}

void eps_list_flag(CLI::App* app, Flags& flags, const std::string& default_note) {
  flag<std::vector<double>>(app, flags, "--eps-list", "eps_list", "Mollification scales (default " + default_note + ")");
}

void mc_flags(CLI::App* app, Flags& flags, const std::string& m_default, const std::string& seed_default) {
  flag<std::size_t>(app, flags, "-M,--samples", "M", "Monte-Carlo sample count (default " + m_default + ")");
  flag<std::uint64_t>(app, flags, "--first-seed", "first_seed", "Seed of sample 0 (default " + seed_default + ")");
}

RunConfig load(const Flags& flags, bool uses_eps = true) {
  auto config = parse_config(fs::path(flags.config_path), flags.overrides());
  if (!uses_eps) return config;
  for (const auto& w : config.warnings) std::cerr << "warning: " << w << "\n";
  return config;
}

int finish(const ExperimentReport& report, const RunConfig& config) {
  const auto path = fs::path(config.output_dir) / (report.name + ".json");
  write_report_json(report, path);
  for (const auto& v : report.verdicts) {
    std::printf("%-28s %s  %s\n", v.criterion.c_str(), v.passed ? "PASS" : "FAIL", v.detail.c_str());
  }
  std::printf("report: %s\n", path.string().c_str());
  return report.all_passed() ? 0 : kExitVerdict;
}

// ---------------------------------------------------------------------------

int cmd_sample_noise(const Flags& flags) {
  const auto config = load(flags, false);
  const TorusGrid grid(config.n);
  const auto noise = sample_white_noise(config.seed, grid);
  const auto dir = fs::path(config.output_dir);
  write_field_snapshot(noise.xi, dir / "xi.wnls");

  nlohmann::ordered_json summary;
  summary["seed"] = config.seed;
  summary["n"] = config.n;
  summary["mode_variance"] = kModeVariance;
  summary["snapshot"] = (dir / "xi.wnls").string();
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_build_env(const Flags& flags) {
  const auto config = load(flags);
  enforce_resolution_policy(config);
  const TorusGrid grid(config.n);
  const auto noise = sample_white_noise(config.seed, grid);
  const auto env = build_environment(noise, config.eps, config.rho());
  const auto dir = fs::path(config.output_dir);
  write_field_snapshot(env.y_eps(), dir / "y_eps.wnls");
  write_field_snapshot(env.wick(), dir / "wick.wnls");

  nlohmann::ordered_json summary;
  summary["seed"] = config.seed;
  summary["n"] = config.n;
  summary["eps"] = config.eps;
  summary["mollifier"] = config.mollifier;
  summary["c_eps"] = env.c_eps();
  summary["k_eps"] = env.k_eps();
  summary["sup_exp_2y"] = env.weights().sup_exp_2y;
  summary["sup_exp_neg_2y"] = env.weights().sup_exp_neg_2y;
  summary["warnings"] = config.warnings;
  write_text(dir / "env.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_solve(const Flags& flags) {
  const auto config = load(flags);
  enforce_resolution_policy(config);
  const TorusGrid grid(config.n);
  const auto noise = sample_white_noise(config.seed, grid);
  const auto env = build_environment(noise, config.eps, config.rho());
  const auto v0 = smooth_random_field(config.v0_seed, grid, config.v0_norm);
  const auto solver = config.solver();

  if (solver.lambda == 1) {
    const auto gate = check_small_data(v0, env, solver.lambda);
    std::cerr << "small-data check: lhs " << gate.lhs << (gate.pass ? " (pass)" : " (fail)") << "\n";
  }
  const auto traj = integrate(gauge_to_u(v0, env), env, solver);
  const auto series = compute_series(traj, env, solver.lambda);
  const auto drift = drift_report(series);

  const auto dir = fs::path(config.output_dir);
  write_series_csv(series, dir / "series.csv");
  write_field_snapshot(gauge_to_v(traj.final_state, env), dir / "v_final.wnls");

  nlohmann::ordered_json summary;
  summary["config"] = to_json(config);
  summary["c_eps"] = env.c_eps();
  summary["k_eps"] = env.k_eps();
  summary["steps"] = traj.steps;
  summary["final_time"] = traj.final_time;
  for (const auto& e : drift.entries) summary["drift"][e.quantity] = e.drift;
  summary["warnings"] = config.warnings;
  write_text(dir / "solve.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_convergence(const Flags& flags) {
  const auto config = load(flags);
  ConvergenceParams p;
  p.seed = config.seed;
  if (!config.eps_list.empty()) p.eps_list = config.eps_list;
  p.gamma = config.gamma;
  p.n = config.n;
  p.solver = config.solver();
  p.mollifier = config.rho();
  p.v0_norm = config.v0_norm;
  p.v0_seed = config.v0_seed;
  p.force = config.force;
  if (!config.seeds.empty()) return finish(run_convergence_median(p, config.seeds), config);
  return finish(run_convergence(p), config);
}

int cmd_mc_regularity(const Flags& flags) {
  const auto config = load(flags);
  enforce_resolution_policy(config);
  RegularityParams p;
  p.samples = config.samples;
  if (!config.eps_list.empty()) p.eps_list = config.eps_list;
  p.kappa = config.kappa;
  p.kappa_prime = config.kappa_prime;
  p.n = config.n;
  p.first_seed = config.first_seed;
  p.mollifier = config.rho();
  return finish(run_mc_regularity(p), config);
}

int cmd_mc_moments(const Flags& flags) {
  const auto config = load(flags);
  enforce_resolution_policy(config);
  MomentsParams p;
  p.samples = config.samples;
  if (!config.eps_list.empty()) p.eps_list = config.eps_list;
  p.n = config.n;
  p.first_seed = config.first_seed;
  p.mollifier = config.rho();
  p.expected = gaussian_moment_ratio_oracle(4'000'000, 20240);
  return finish(run_mc_moments(p), config);
}

int cmd_phase_check(const Flags& flags) {
  const auto config = load(flags);
  enforce_resolution_policy(config);
  PhaseCheckParams p;
  p.seed = config.seed;
  p.eps = config.eps;
  p.n = config.n;
  p.solver = config.solver();
  p.mollifier = config.rho();
  p.v0_norm = config.v0_norm;
  p.v0_seed = config.v0_seed;
  return finish(run_phase_check(p), config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral NLS with a white-noise potential on the 2D torus"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    Flags flags;
    std::function<int(const Flags&)> run;
  };
  std::vector<std::unique_ptr<Command>> commands;
  const auto add = [&](const std::string& name, const std::string& help, std::function<int(const Flags&)> run) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, help);
    cmd->run = std::move(run);
    common_flags(cmd->app, cmd->flags);
    commands.push_back(std::move(cmd));
    return commands.back().get();
  };

  add("sample-noise", "Sample one white-noise realization and write xi.wnls", cmd_sample_noise);
  add("build-env", "Mollify, renormalize and write y_eps.wnls, wick.wnls, env.json", cmd_build_env);

  auto* solve = add("solve", "Integrate one trajectory; writes series.csv, v_final.wnls, solve.json", cmd_solve);
  solver_flags(solve->app, solve->flags);

  auto* conv = add("convergence", "Cauchy decay of v_eps in H^gamma along eps = 2^-k", cmd_convergence);
  solver_flags(conv->app, conv->flags);
  eps_list_flag(conv->app, conv->flags, "2^-3..2^-6");
  flag<std::vector<std::uint64_t>>(conv->app, conv->flags, "--seeds", "seeds",
                                   "Several noise seeds; reports the median D_k (default: --seed only)");
  flag<double>(conv->app, conv->flags, "--gamma", "gamma", "Sobolev index in (1, 2) (default 1.5)");

  auto* reg = add("mc-regularity", "Monte-Carlo Besov distances to the unmollified fields", cmd_mc_regularity);
  eps_list_flag(reg->app, reg->flags, "2^-2..2^-5");
  mc_flags(reg->app, reg->flags, "200", "1000");
  flag<double>(reg->app, reg->flags, "--kappa", "kappa", "kappa (default 0.1)");
  flag<double>(reg->app, reg->flags, "--kappa-prime", "kappa_prime", "kappa' (default 0.2)");

  auto* mom = add("mc-moments", "Monte-Carlo L4 moments of grad Y_eps and its Wick square", cmd_mc_moments);
  eps_list_flag(mom->app, mom->flags, "2^-2..2^-5");
  mc_flags(mom->app, mom->flags, "200", "1000");

  auto* phase = add("phase-check", "Renormalized vs phase-rotated unrenormalized run", cmd_phase_check);
  solver_flags(phase->app, phase->flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;
    try {
      return cmd->run(cmd->flags);
    } catch (const SmallDataViolation& e) {
      std::cerr << "error: " << e.what() << " (pass --force to override)\n";
      return kExitUsage;
    } catch (const InvalidConfig& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const UnresolvedMollifier& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const BlowUp& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRuntime;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRuntime;
    }
  }
  return kExitUsage;
}
