#pragma once

// Strang splitting for the regularized equation in the u-gauge,
//   i du/dt = Laplace(u) + lambda |u|^2 u + V u,   V = xi_eps - C_eps (renormalized) or xi_eps,
// which is the gauge image (u = v e^{-Y_eps}) of the v-equation carrying the
// advection term -2 grad v . grad Y_eps and the Wick potential.

#include <cstdint>
#include <vector>

#include "wnls/noise.hpp"
#include "wnls/spectral.hpp"

namespace wnls {

struct SolverConfig {
  int lambda = 0;  // -1 defocusing, 0 linear, +1 focusing
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_every = 1;
  bool renormalized = true;
  bool dealias = true;
  /// Run lambda = +1 even when the small-data condition fails.
  bool override_small_data = false;

  /// Checks the parameter ranges that do not depend on the environment.
  void validate() const;
};

struct SmallDataCheck {
  bool pass = true;
  double lhs = 0.0;     // ||e^{-2Y}||^3_inf ||e^{2Y}||_inf ||v0||_L2
  double margin = 1.0;  // 1 - lhs
};

SmallDataCheck check_small_data(const SpectralField& v0, const RenormEnvironment& env, int lambda);

/// v = u e^{Y_eps}
SpectralField gauge_to_v(const SpectralField& u, const RenormEnvironment& env);
/// u = v e^{-Y_eps}
SpectralField gauge_to_u(const SpectralField& v, const RenormEnvironment& env);

/// Physical values of the multiplicative potential.
RealArray potential_values(const RenormEnvironment& env, bool renormalized);

/// Reusable workspace for repeated steps on one environment. Works on physical
/// values so consecutive steps need one forward/backward transform pair each
/// (plus one pair per half step for the dealiased |u|^2).
class StrangStepper {
 public:
  StrangStepper(const RenormEnvironment& env, const SolverConfig& config);

  /// Potential half step, exact Fourier step exp(i dt |k|^2), potential half step.
  void step(ComplexArray& u_physical, double dt);

  double max_abs_potential() const noexcept { return max_potential_; }

 private:
  void potential_phase(ComplexArray& u, double half_dt);
  const ComplexArray& kinetic_phases(double dt);

  TorusGrid grid_;
  int lambda_;
  bool dealias_;
  RealArray potential_;
  double max_potential_ = 0.0;
  ComplexArray work_;
  ComplexArray density_;
  double cached_dt_ = 0.0;
  ComplexArray cached_phases_;
};

SpectralField strang_step(const SpectralField& u, double dt, const RenormEnvironment& env,
                          const SolverConfig& config);

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> snapshots;  // u-gauge
  SolverConfig config;
  const RenormEnvironment* env = nullptr;  // non-owning; must outlive the trajectory
  SpectralField final_state;
  double final_time = 0.0;
  std::int64_t steps = 0;
};

/// Integrates to t_end, shortening the last step to land on t_end exactly.
/// Snapshots are taken at step indices divisible by snapshot_every.
/// Throws SmallDataViolation (lambda = 1, gate failed, no override), BlowUp, or
/// InvalidConfig when dt max|V| >= pi.
Trajectory integrate(const SpectralField& u0, const RenormEnvironment& env, const SolverConfig& config);

}  // namespace wnls
