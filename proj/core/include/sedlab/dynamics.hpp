#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sedlab/vacuum_field.hpp"

namespace sedlab {

/// Charged harmonic oscillator with radiation damping
///   m x'' = -m w0^2 x - m Gamma w0^2 x' + q (E_p(t) + E_vac(t)).
///
/// Motion is strictly one-dimensional along x, so the magnetic Lorentz term
/// (v x B)_x vanishes identically and is not modelled.
struct OscillatorParams {
  double mass = 1.0;
  double charge = 1.0;
  double omega0 = 1.0;
  double gamma_rad = 1e-3;

  double linewidth() const noexcept { return gamma_rad * omega0 * omega0; }

  /// Throws ParameterError. Gamma = 0 is accepted only when
  /// `allow_undamped` is set (free-oscillator checks).
  void validate(bool allow_undamped = false) const;
  std::vector<std::string> warnings() const;

  static OscillatorParams from(const FieldSpec& spec) noexcept {
    return {spec.mass, spec.charge, spec.omega0, spec.gamma_rad};
  }
};

/// Gaussian-envelope pulse E0 exp(-(t-tc)^2 / (2 s^2)) cos(wp (t-tc)).
struct PulseSpec {
  double amplitude = 0.0;
  double omega_p = 1.0;
  double t_center = 0.0;
  double sigma_t = 1.0;
  bool enabled = false;

  void validate() const;
};

double pulse_field_at(const PulseSpec& pulse, double t) noexcept;

struct PhaseSample {
  double x;
  double v;
};

/// Uniformly sampled record; sample k is at time t0 + k * dt.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<PhaseSample> samples;
  OscillatorParams params;

  double time_at(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
  double t_end() const noexcept {
    return samples.empty() ? t0 : time_at(samples.size() - 1);
  }
};

struct TimeSpan {
  double begin;
  double end;
};

struct IntegrationOptions {
  double dt = 0.01;
  /// Record every `stride`-th step.
  std::size_t stride = 1;
  /// First recorded time; defaults to the span start. Earlier steps are
  /// integrated but not stored.
  std::optional<double> record_from;
  /// Phasor re-anchoring interval in half-steps.
  std::size_t resync_interval = 1024;
};

/// Largest step allowed for a given forcing: 2 pi / (20 w_max).
double max_stable_step(const OscillatorParams& params, const ModeTable* field,
                       const PulseSpec* pulse) noexcept;

/// Classic fixed-step fourth-order Runge-Kutta on (x, v). The vacuum field is
/// evaluated exactly at the substep times through a FieldStepper advancing in
/// half steps, so no interpolation is involved. Value type: copying an
/// integrator forks the trajectory.
class OscillatorIntegrator {
 public:
  OscillatorIntegrator(const OscillatorParams& params, const ModeTable* field,
                       std::optional<PulseSpec> pulse, PhaseSample state, double t0, double dt,
                       std::size_t resync_interval = 1024);

  void step();
  const PhaseSample& state() const noexcept { return state_; }
  double time() const noexcept { return t0_ + static_cast<double>(steps_) * dt_; }
  std::size_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return dt_; }
  double energy() const noexcept;

  /// Replace the pulse from the next step on.
  void set_pulse(std::optional<PulseSpec> pulse) { pulse_ = std::move(pulse); }

 private:
  double forcing(double t, double vacuum) const noexcept;

  OscillatorParams params_;
  std::optional<PulseSpec> pulse_;
  FieldStepper field_;
  PhaseSample state_;
  double t0_;
  double dt_;
  std::size_t steps_ = 0;
  double w2_;
  double damping_;
  double q_over_m_;
  double vac_now_ = 0.0;
};

/// Integrates over `span`. Preconditions are checked: dt within
/// max_stable_step, non-empty span, finite initial state. A non-finite state
/// throws DivergenceError carrying the step index.
Trajectory integrate_trajectory(const OscillatorParams& params, const ModeTable* field,
                                const PulseSpec* pulse, PhaseSample initial, TimeSpan span,
                                const IntegrationOptions& options);

/// Number of uniform steps of size dt that fit in `length` (tolerant to
/// rounding of exact multiples).
std::size_t step_count(double length, double dt) noexcept;

/// CSV with columns t,x,v; every `stride`-th sample.
void write_csv(std::ostream& out, const Trajectory& traj, std::size_t stride = 1);

}  // namespace sedlab
