#pragma once

// Experiment drivers. Each returns an ExperimentReport whose verdicts can be
// recomputed from its tables alone.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wnls/noise.hpp"
#include "wnls/rate_fit.hpp"
#include "wnls/solver.hpp"

namespace wnls {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Verdict {
  std::string criterion;
  bool passed = false;
  std::string detail;
};

struct NamedFit {
  std::string name;
  RateFit fit;
};

struct ExperimentReport {
  std::string name;
  std::vector<std::uint64_t> seeds;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<Table> tables;
  std::vector<NamedFit> fits;
  std::vector<Verdict> verdicts;

  bool all_passed() const noexcept;
  const Table& table(const std::string& table_name) const;
  const RateFit& fit(const std::string& fit_name) const;
  const Verdict& verdict(const std::string& criterion) const;
};

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Callers write results into slot i, so the reduction order never depends on
/// scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// eps_k = 2^-k for k in [k_first, k_last].
std::vector<double> dyadic_eps(int k_first, int k_last);

/// Smooth band-limited random field, coefficients N(0,1)/(1+|k|^2) on
/// max(|k1|,|k2|) <= bandwidth, scaled to the requested L2 norm.
SpectralField smooth_random_field(std::uint64_t seed, const TorusGrid& grid, double l2_norm, int bandwidth = 4);

/// Environment with Y = 0 and C = 0 (no noise at all).
RenormEnvironment zero_environment(const TorusGrid& grid, double eps);

// ---------------------------------------------------------------------------

struct ConvergenceParams {
  std::uint64_t seed = 1;
  std::vector<double> eps_list = dyadic_eps(3, 6);
  double gamma = 1.5;
  int n = 128;
  SolverConfig solver{.lambda = 0, .dt = 1e-4, .t_end = 1.0, .snapshot_every = 200};
  Mollifier mollifier{};
  double v0_norm = 0.5;
  std::uint64_t v0_seed = 7;
  bool zero_noise = false;
  /// Allow eps < 4/n.
  bool force = false;
};

/// Cauchy decay D_k = sup_t ||v_{eps_{k+1}} - v_{eps_k}||_{H^gamma} over one realization.
/// Throws UnresolvedMollifier (eps < 4/n without force), InvalidConfig (gamma outside (1,2)),
/// and anything the solver throws.
ExperimentReport run_convergence(const ConvergenceParams& params);

/// run_convergence for each seed (params.seed ignored), then the median of D_k
/// across seeds and its rate.
ExperimentReport run_convergence_median(const ConvergenceParams& params, const std::vector<std::uint64_t>& seeds);

struct PhaseCheckParams {
  std::uint64_t seed = 1;
  double eps = 0.125;
  int n = 64;
  SolverConfig solver{.lambda = 0, .dt = 1e-3, .t_end = 1.0, .snapshot_every = 20};
  Mollifier mollifier{};
  double v0_norm = 0.5;
  std::uint64_t v0_seed = 7;
  bool zero_noise = false;
};

/// Compares the renormalized run with e^{i C_eps t} times the unrenormalized run.
ExperimentReport run_phase_check(const PhaseCheckParams& params);

struct RegularityParams {
  std::size_t samples = 200;
  std::vector<double> eps_list = dyadic_eps(2, 5);
  double kappa = 0.1;
  double kappa_prime = 0.2;
  int n = 128;
  std::uint64_t first_seed = 1000;
  Mollifier mollifier{};
  bool zero_noise = false;
};

/// Monte-Carlo moments of ||Y_eps - Y||_{B^{1-k'}_{inf,inf}},
/// ||wick_eps - wick_0||_{B^{-k'}_{inf,inf}} and ||e^{-2Y_eps} - e^{-2Y}||_{B^{1-k'}_{inf,inf}},
/// with the unmollified grid field as the eps = 0 reference.
ExperimentReport run_mc_regularity(const RegularityParams& params);

/// ||grad Y||^4_{L4} and ||wick||^4_{L4} of one field.
struct GradientMoments {
  double grad_l4_4 = 0.0;
  double wick_l4_4 = 0.0;
};
GradientMoments gradient_moments(const SpectralField& y_eps, double c_eps);

/// Ratios (2pi)^2 E|G|^4 and (2pi)^2 E(|G|^2 - 1)^4 for a planar Gaussian vector
/// G with E|G|^2 = 1, by direct sampling. These are the expected values of
/// m2 / C^2 and m4 / C^4.
struct MomentRatioOracle {
  double grad_ratio = 0.0;
  double wick_ratio = 0.0;
};
MomentRatioOracle gaussian_moment_ratio_oracle(std::size_t samples, std::uint64_t seed);

struct MomentsParams {
  std::size_t samples = 500;
  std::vector<double> eps_list = dyadic_eps(2, 5);
  int n = 128;
  std::uint64_t first_seed = 5000;
  Mollifier mollifier{};
  MomentRatioOracle expected{};
  double grad_tolerance = 0.10;
  double wick_tolerance = 0.25;
};

/// m2 = E||grad Y_eps||^4_{L4}, m4 = E||:|grad Y_eps|^2:||^4_{L4}, their ratios to
/// C^2 and C^4, stability across eps and agreement with the Gaussian oracle.
ExperimentReport run_mc_moments(const MomentsParams& params);

struct WickCenteringParams {
  std::size_t samples = 1000;
  double eps = 0.125;
  int n = 128;
  std::uint64_t first_seed = 9000;
  Mollifier mollifier{};
};

/// Sample mean of the spatial average of the Wick square vs 5 standard errors.
ExperimentReport run_wick_centering(const WickCenteringParams& params);

struct RenormGrowthParams {
  int n = 512;
  std::vector<double> eps_list = dyadic_eps(3, 7);
  Mollifier mollifier{};
};

/// Linear fit of C_eps against |ln eps|.
ExperimentReport run_renorm_growth(const RenormGrowthParams& params);

}  // namespace wnls
