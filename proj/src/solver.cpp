#include "wnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wnls {

void SolverConfig::validate() const {
  if (lambda < -1 || lambda > 1) throw InvalidConfig("lambda must be -1, 0 or 1");
  if (!(dt > 0.0)) throw InvalidConfig("dt must be > 0");
  if (!(t_end >= 0.0)) throw InvalidConfig("t_end must be >= 0");
  if (snapshot_every < 1) throw InvalidConfig("snapshot_every must be >= 1");
}

SmallDataCheck check_small_data(const SpectralField& v0, const RenormEnvironment& env, int lambda) {
  const auto& w = env.weights();
  SmallDataCheck check;
  check.lhs = std::pow(w.sup_exp_neg_2y, 3) * w.sup_exp_2y * lp_norm(v0, 2.0);
  check.margin = 1.0 - check.lhs;
  check.pass = lambda != 1 || check.lhs <= 1.0;
  return check;
}

namespace {

SpectralField multiply_physical(const SpectralField& f, const RealArray& weight) {
  auto values = to_physical(f);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= weight[i];
  return to_spectral(f.grid(), values, false);
}

}  // namespace

SpectralField gauge_to_v(const SpectralField& u, const RenormEnvironment& env) {
  if (!(u.grid() == env.grid())) throw GridMismatch("gauge_to_v: field and environment grids differ");
  return multiply_physical(u, env.weights().exp_y);
}

SpectralField gauge_to_u(const SpectralField& v, const RenormEnvironment& env) {
  if (!(v.grid() == env.grid())) throw GridMismatch("gauge_to_u: field and environment grids differ");
  return multiply_physical(v, env.weights().exp_neg_y);
}

RealArray potential_values(const RenormEnvironment& env, bool renormalized) {
  RealArray v = env.xi_values();
  if (renormalized) {
    for (auto& x : v) x -= env.c_eps();
  }
  return v;
}

// ---------------------------------------------------------------------------

StrangStepper::StrangStepper(const RenormEnvironment& env, const SolverConfig& config)
    : grid_(env.grid()),
      lambda_(config.lambda),
      dealias_(config.dealias),
      potential_(potential_values(env, config.renormalized)),
      work_(grid_.size()),
      density_(grid_.size()) {
  for (double x : potential_) max_potential_ = std::max(max_potential_, std::abs(x));
}

void StrangStepper::potential_phase(ComplexArray& u, double half_dt) {
  if (lambda_ == 0) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::polar(1.0, -half_dt * potential_[i]);
    return;
  }
  for (std::size_t i = 0; i < u.size(); ++i) density_[i] = std::norm(u[i]);
  if (dealias_) {
    fft::forward(grid_, density_, density_);
    const int n = grid_.n();
    for (int a = 0; a < n; ++a) {
      const int k1 = grid_.wavenumber(a);
      for (int b = 0; b < n; ++b) {
        if (!in_dealias_band(grid_, k1, grid_.wavenumber(b))) density_[grid_.index(a, b)] = 0.0;
      }
    }
    fft::backward(grid_, density_, density_);
  }
  // |u| is invariant under this substep, so the phase rotation is its exact flow.
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] *= std::polar(1.0, -half_dt * (lambda_ * density_[i].real() + potential_[i]));
  }
}

const ComplexArray& StrangStepper::kinetic_phases(double dt) {
  if (dt != cached_dt_ || cached_phases_.empty()) {
    const int n = grid_.n();
    cached_phases_.resize(grid_.size());
    for (int a = 0; a < n; ++a) {
      const int k1 = grid_.wavenumber(a);
      for (int b = 0; b < n; ++b) {
        const int k2 = grid_.wavenumber(b);
        cached_phases_[grid_.index(a, b)] = std::polar(1.0, dt * (k1 * k1 + k2 * k2));
      }
    }
    cached_dt_ = dt;
  }
  return cached_phases_;
}

void StrangStepper::step(ComplexArray& u, double dt) {
  if (u.size() != grid_.size()) throw ShapeMismatch("StrangStepper: state size does not match grid");
  potential_phase(u, 0.5 * dt);
  fft::forward(grid_, u, work_);
  const auto& phases = kinetic_phases(dt);
  for (std::size_t i = 0; i < work_.size(); ++i) work_[i] *= phases[i];
  fft::backward(grid_, work_, u);
  potential_phase(u, 0.5 * dt);
}

SpectralField strang_step(const SpectralField& u, double dt, const RenormEnvironment& env,
                          const SolverConfig& config) {
  if (!(u.grid() == env.grid())) throw GridMismatch("strang_step: field and environment grids differ");
  StrangStepper stepper(env, config);
  auto values = to_physical(u);
  stepper.step(values, dt);
  for (const auto& c : values) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw BlowUp(0, "non-finite value after step 0");
  }
  return to_spectral(u.grid(), values, false);
}

// ---------------------------------------------------------------------------

Trajectory integrate(const SpectralField& u0, const RenormEnvironment& env, const SolverConfig& config) {
  config.validate();
  if (!(u0.grid() == env.grid())) throw GridMismatch("integrate: initial field and environment grids differ");

  if (config.lambda == 1 && !config.override_small_data) {
    const auto gate = check_small_data(gauge_to_v(u0, env), env, config.lambda);
    if (!gate.pass) {
      throw SmallDataViolation(gate.lhs, "small-data condition fails: ||e^{-2Y}||^3 ||e^{2Y}|| ||v0||_L2 = " +
                                             std::to_string(gate.lhs) + " > 1");
    }
  }

  StrangStepper stepper(env, config);
  if (!(config.dt * stepper.max_abs_potential() < kPi)) {
    throw InvalidConfig("dt * max|V| = " + std::to_string(config.dt * stepper.max_abs_potential()) +
                        " must be < pi");
  }

  // Full steps, then one shortened step when t_end is not a multiple of dt.
  auto full_steps = static_cast<std::int64_t>(std::floor(config.t_end / config.dt));
  double remainder = config.t_end - static_cast<double>(full_steps) * config.dt;
  if (remainder <= 1e-9 * config.dt) {
    remainder = 0.0;
  } else if (remainder >= config.dt * (1.0 - 1e-9)) {
    ++full_steps;
    remainder = 0.0;
  }
  const std::int64_t total_steps = full_steps + (remainder > 0.0 ? 1 : 0);

  Trajectory traj{.times = {},
                  .snapshots = {},
                  .config = config,
                  .env = &env,
                  .final_state = u0,
                  .final_time = 0.0,
                  .steps = total_steps};
  traj.times.push_back(0.0);
  traj.snapshots.push_back(u0);

  auto values = to_physical(u0);
  for (std::int64_t s = 1; s <= total_steps; ++s) {
    const bool partial = s > full_steps;
    stepper.step(values, partial ? remainder : config.dt);

    double total = 0.0;
    for (const auto& c : values) total += std::norm(c);
    if (!std::isfinite(total)) {
      throw BlowUp(s, "non-finite field at step " + std::to_string(s));
    }
    if (s % config.snapshot_every == 0) {
      traj.times.push_back(partial ? config.t_end : static_cast<double>(s) * config.dt);
      traj.snapshots.push_back(to_spectral(u0.grid(), values, false));
    }
  }
  traj.final_time = total_steps == full_steps ? static_cast<double>(full_steps) * config.dt : config.t_end;
  traj.final_state = to_spectral(u0.grid(), values, false);
  return traj;
}

}  // namespace wnls
