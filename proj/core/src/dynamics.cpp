#include "sedlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sedlab/csv.hpp"
#include "sedlab/errors.hpp"

namespace sedlab {

namespace {

void require_positive(double value, const char* key) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(key, "must be finite and > 0");
  }
}

}  // namespace

void OscillatorParams::validate(bool allow_undamped) const {
  require_positive(mass, "mass");
  require_positive(charge, "charge");
  require_positive(omega0, "omega0");
  if (allow_undamped) {
    if (!(gamma_rad >= 0.0) || !std::isfinite(gamma_rad)) {
      throw ParameterError("gamma_rad", "must be finite and >= 0");
    }
  } else {
    require_positive(gamma_rad, "gamma_rad");
  }
}

std::vector<std::string> OscillatorParams::warnings() const {
  std::vector<std::string> out;
  if (linewidth() / omega0 > 0.1) {
    out.emplace_back("linewidth/omega0 = " + format_double(linewidth() / omega0) +
                     " is not small; the oscillator is not underdamped");
  }
  return out;
}

void PulseSpec::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw ParameterError("amplitude", "must be finite and >= 0");
  }
  if (!std::isfinite(omega_p) || omega_p < 0.0) {
    throw ParameterError("omega_p", "must be finite and >= 0");
  }
  if (!std::isfinite(t_center)) throw ParameterError("t_center", "must be finite");
  if (enabled) require_positive(sigma_t, "sigma_t");
}

double pulse_field_at(const PulseSpec& pulse, double t) noexcept {
  if (!pulse.enabled) return 0.0;
  const double u = t - pulse.t_center;
  return pulse.amplitude * std::exp(-u * u / (2.0 * pulse.sigma_t * pulse.sigma_t)) *
         std::cos(pulse.omega_p * u);
}

double max_stable_step(const OscillatorParams& params, const ModeTable* field,
                       const PulseSpec* pulse) noexcept {
  double w = params.omega0;
  if (field != nullptr && field->size() > 0) {
    w = std::max(w, field->spec.omega0 + 0.5 * field->spec.bandwidth);
    w = std::max(w, field->max_frequency());
  }
  if (pulse != nullptr && pulse->enabled) w = std::max(w, pulse->omega_p);
  return 2.0 * std::numbers::pi / (w * 20.0);
}

std::size_t step_count(double length, double dt) noexcept {
  if (!(length > 0.0) || !(dt > 0.0)) return 0;
  const double r = length / dt;
  return static_cast<std::size_t>(std::floor(r * (1.0 + 1e-12) + 1e-9));
}

OscillatorIntegrator::OscillatorIntegrator(const OscillatorParams& params, const ModeTable* field,
                                           std::optional<PulseSpec> pulse, PhaseSample state,
                                           double t0, double dt, std::size_t resync_interval)
    : params_(params),
      pulse_(std::move(pulse)),
      state_(state),
      t0_(t0),
      dt_(dt),
      w2_(params.omega0 * params.omega0),
      damping_(params.gamma_rad * params.omega0 * params.omega0),
      q_over_m_(params.charge / params.mass) {
  if (field != nullptr && field->size() > 0) {
    field_ = FieldStepper(*field, t0, 0.5 * dt, resync_interval);
    vac_now_ = field_.value();
  }
}

double OscillatorIntegrator::forcing(double t, double vacuum) const noexcept {
  double e = vacuum;
  if (pulse_ && pulse_->enabled) e += pulse_field_at(*pulse_, t);
  return q_over_m_ * e;
}

void OscillatorIntegrator::step() {
  const double t = time();
  const double h = dt_;
  const double x = state_.x;
  const double v = state_.v;

  double vac_mid = 0.0;
  double vac_end = 0.0;
  if (!field_.empty()) {
    field_.advance();
    vac_mid = field_.value();
    field_.advance();
    vac_end = field_.value();
  }
  const double f0 = forcing(t, vac_now_);
  const double fm = forcing(t + 0.5 * h, vac_mid);
  const double f1 = forcing(t + h, vac_end);

  auto accel = [&](double xx, double vv, double f) { return -w2_ * xx - damping_ * vv + f; };

  const double k1x = v;
  const double k1v = accel(x, v, f0);
  const double k2x = v + 0.5 * h * k1v;
  const double k2v = accel(x + 0.5 * h * k1x, k2x, fm);
  const double k3x = v + 0.5 * h * k2v;
  const double k3v = accel(x + 0.5 * h * k2x, k3x, fm);
  const double k4x = v + h * k3v;
  const double k4v = accel(x + h * k3x, k4x, f1);

  state_.x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  state_.v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  vac_now_ = vac_end;
  ++steps_;
  if (!std::isfinite(state_.x) || !std::isfinite(state_.v)) throw DivergenceError(steps_);
}

double OscillatorIntegrator::energy() const noexcept {
  return 0.5 * params_.mass * (state_.v * state_.v + w2_ * state_.x * state_.x);
}

Trajectory integrate_trajectory(const OscillatorParams& params, const ModeTable* field,
                                const PulseSpec* pulse, PhaseSample initial, TimeSpan span,
                                const IntegrationOptions& options) {
  params.validate(/*allow_undamped=*/true);
  if (pulse != nullptr) pulse->validate();
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) {
    throw ParameterError("dt", "must be finite and > 0");
  }
  const double limit = max_stable_step(params, field, pulse);
  if (options.dt > limit) {
    throw ParameterError("dt", "step " + format_double(options.dt) +
                                   " exceeds 2 pi / (20 w_max) = " + format_double(limit));
  }
  if (!(span.end > span.begin) || !std::isfinite(span.begin) || !std::isfinite(span.end)) {
    throw ParameterError("t_span", "must be a finite, non-empty interval");
  }
  if (!std::isfinite(initial.x) || !std::isfinite(initial.v)) {
    throw ParameterError("initial_state", "must be finite");
  }
  if (options.stride < 1) throw ParameterError("stride", "must be >= 1");

  const std::size_t n_steps = step_count(span.end - span.begin, options.dt);
  std::size_t first = 0;
  if (options.record_from) {
    const double offset = *options.record_from - span.begin;
    if (offset > 0.0) {
      first = static_cast<std::size_t>(std::ceil(offset / options.dt * (1.0 - 1e-12) - 1e-9));
    }
    if (first > n_steps) throw ParameterError("record_from", "lies after the end of the span");
  }

  Trajectory traj;
  traj.params = params;
  traj.t0 = span.begin + static_cast<double>(first) * options.dt;
  traj.dt = options.dt * static_cast<double>(options.stride);
  traj.samples.reserve((n_steps - first) / options.stride + 1);

  std::optional<PulseSpec> p;
  if (pulse != nullptr && pulse->enabled) p = *pulse;
  OscillatorIntegrator integ(params, field, p, initial, span.begin, options.dt,
                             options.resync_interval);
  if (first == 0) traj.samples.push_back(integ.state());
  for (std::size_t k = 1; k <= n_steps; ++k) {
    integ.step();
    if (k >= first && (k - first) % options.stride == 0) traj.samples.push_back(integ.state());
  }
  return traj;
}

void write_csv(std::ostream& out, const Trajectory& traj, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  CsvWriter csv(out);
  csv.header({"t", "x", "v"});
  for (std::size_t k = 0; k < traj.samples.size(); k += stride) {
    csv.row({traj.time_at(k), traj.samples[k].x, traj.samples[k].v});
  }
}

}  // namespace sedlab
