#pragma once

// Conserved quantities of the v-dynamics and their drift along trajectories.

#include <string>
#include <utility>
#include <vector>

#include "wnls/noise.hpp"
#include "wnls/solver.hpp"

namespace wnls {

/// integral |v|^2 e^{-2Y_eps}
double transformed_mass(const SpectralField& v, const RenormEnvironment& env);

/// integral (1/2 |grad v|^2 - 1/2 |v|^2 :|grad Y_eps|^2: - lambda/4 |v|^4 e^{-2Y_eps}) e^{-2Y_eps}.
/// The Wick term carries the sign that makes this the invariant of the
/// v-equation (see README, "Transformed energy").
double transformed_energy(const SpectralField& v, const RenormEnvironment& env, int lambda);

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> mass_u;
  std::vector<double> t_mass;
  std::vector<double> t_energy;
  std::vector<double> h1_v;
  std::vector<double> h2_v;
  std::vector<double> k_eps;

  std::size_t size() const noexcept { return times.size(); }
};

/// Evaluates every diagnostic at each snapshot of the trajectory.
DiagnosticSeries compute_series(const Trajectory& trajectory, const RenormEnvironment& env, int lambda);

struct DriftEntry {
  std::string quantity;
  double drift = 0.0;
};

struct DriftSummary {
  std::vector<DriftEntry> entries;  // mass_u, t_mass, t_energy

  double drift(const std::string& quantity) const;
};

/// Relative drift max_t |Q(t) - Q(0)| / max(|Q(0)|, 1e-3 max_t |Q(t)|).
double relative_drift(const std::vector<double>& values);

/// Drift of the conserved quantities. Throws EmptySeries.
DriftSummary drift_report(const DiagnosticSeries& series);

/// Fitted order p in drift ~ dt^p from (dt, drift) pairs of a refinement family.
double drift_order(const std::vector<std::pair<double, double>>& dt_and_drift);

}  // namespace wnls
