#include "wnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "wnls/rate_fit.hpp"

namespace wnls {

double transformed_mass(const SpectralField& v, const RenormEnvironment& env) {
  if (!(v.grid() == env.grid())) throw GridMismatch("transformed_mass: field and environment grids differ");
  const auto values = to_physical(v);
  const auto& weight = env.weights().exp_neg_2y;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += std::norm(values[i]) * weight[i];
  return v.grid().cell_area() * sum;
}

double transformed_energy(const SpectralField& v, const RenormEnvironment& env, int lambda) {
  if (!(v.grid() == env.grid())) throw GridMismatch("transformed_energy: field and environment grids differ");
  const auto values = to_physical(v);
  const auto d1 = to_physical(derivative(v, Axis::kX1));
  const auto d2 = to_physical(derivative(v, Axis::kX2));
  const auto& weight = env.weights().exp_neg_2y;
  const auto& wick = env.wick_values();

  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double density = std::norm(values[i]);
    const double grad_sq = std::norm(d1[i]) + std::norm(d2[i]);
    const double integrand =
        0.5 * grad_sq - 0.5 * density * wick[i] - 0.25 * lambda * density * density * weight[i];
    sum += integrand * weight[i];
  }
  return v.grid().cell_area() * sum;
}

DiagnosticSeries compute_series(const Trajectory& trajectory, const RenormEnvironment& env, int lambda) {
  DiagnosticSeries series;
  for (std::size_t i = 0; i < trajectory.snapshots.size(); ++i) {
    const auto& u = trajectory.snapshots[i];
    const auto v = gauge_to_v(u, env);
    const double mass = lp_norm(u, 2.0);
    series.times.push_back(trajectory.times[i]);
    series.mass_u.push_back(mass * mass);
    series.t_mass.push_back(transformed_mass(v, env));
    series.t_energy.push_back(transformed_energy(v, env, lambda));
    series.h1_v.push_back(sobolev_norm(v, 1.0));
    series.h2_v.push_back(sobolev_norm(v, 2.0));
    series.k_eps.push_back(env.k_eps());
  }
  return series;
}

double DriftSummary::drift(const std::string& quantity) const {
  for (const auto& e : entries) {
    if (e.quantity == quantity) return e.drift;
  }
  throw Error("no drift entry named " + quantity);
}

double relative_drift(const std::vector<double>& values) {
  if (values.empty()) throw EmptySeries("drift of an empty series");
  const double q0 = values.front();
  double scale = 0.0;
  double deviation = 0.0;
  for (double q : values) {
    scale = std::max(scale, std::abs(q));
    deviation = std::max(deviation, std::abs(q - q0));
  }
  if (deviation == 0.0) return 0.0;
  return deviation / std::max(std::abs(q0), 1e-3 * scale);
}

DriftSummary drift_report(const DiagnosticSeries& series) {
  if (series.size() == 0) throw EmptySeries("drift report needs a nonempty series");
  DriftSummary summary;
  summary.entries.push_back({"mass_u", relative_drift(series.mass_u)});
  summary.entries.push_back({"t_mass", relative_drift(series.t_mass)});
  summary.entries.push_back({"t_energy", relative_drift(series.t_energy)});
  return summary;
}

double drift_order(const std::vector<std::pair<double, double>>& dt_and_drift) {
  std::vector<std::pair<double, double>> points(dt_and_drift.begin(), dt_and_drift.end());
  return fit_log_rate(points, RateModel::kPurePower).slope;
}

}  // namespace wnls
