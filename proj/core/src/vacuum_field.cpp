#include "sedlab/vacuum_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sedlab/csv.hpp"
#include "sedlab/errors.hpp"
#include "sedlab/random.hpp"

namespace sedlab {

namespace {

void require_positive(double value, const char* key) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(key, "must be finite and > 0");
  }
}

}  // namespace

void FieldSpec::validate() const {
  require_positive(omega0, "omega0");
  require_positive(gamma_rad, "gamma_rad");
  require_positive(mass, "mass");
  require_positive(charge, "charge");
  require_positive(hbar, "hbar");
  require_positive(bandwidth, "bandwidth");
  if (n_modes < 1) throw ParameterError("n_modes", "must be >= 1");
  if (bandwidth / 2.0 >= omega0) {
    throw ParameterError("bandwidth", "window must stay at positive frequencies (bandwidth < 2 omega0)");
  }
}

std::vector<std::string> FieldSpec::warnings() const {
  std::vector<std::string> out;
  if (bandwidth < 10.0 * linewidth()) {
    out.emplace_back("bandwidth " + format_double(bandwidth) +
                     " is narrower than 10 linewidths (" + format_double(10.0 * linewidth()) +
                     "); the window does not cover the resonance");
  }
  return out;
}

double spectral_density(const FieldSpec& spec, double omega) noexcept {
  return spec.mass * spec.hbar * spec.gamma_rad * omega * omega * omega /
         (spec.charge * spec.charge);
}

double ModeTable::mean_square() const noexcept {
  double s = 0.0;
  for (double a : amplitudes) s += 0.5 * a * a;
  return s;
}

double ModeTable::max_frequency() const noexcept {
  return frequencies.empty() ? 0.0 : frequencies.back();
}

double ModeTable::amplitude_sum() const noexcept {
  double s = 0.0;
  for (double a : amplitudes) s += std::abs(a);
  return s;
}

ModeTable synthesize_modes(const FieldSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_modes;
  const double bin = spec.bandwidth / static_cast<double>(n);
  const double lo = spec.omega0 - 0.5 * spec.bandwidth;
  const double two_pi = 2.0 * std::numbers::pi;

  ModeTable table;
  table.spec = spec;
  table.frequencies.resize(n);
  table.amplitudes.resize(n);
  table.phases.resize(n);

  // Frequencies and phases come from separate streams so that changing one
  // draw order never perturbs the other.
  Rng jitter(derive_seed(spec.seed, 0));
  Rng phase(derive_seed(spec.seed, 1));
  for (std::size_t i = 0; i < n; ++i) {
    const double left = lo + static_cast<double>(i) * bin;
    const double w = left + jitter.uniform() * bin;
    table.frequencies[i] = w;
    table.amplitudes[i] = std::sqrt((2.0 / std::numbers::pi) * spectral_density(spec, w) * bin);
    table.phases[i] = std::min(phase.uniform() * two_pi, std::nextafter(two_pi, 0.0));
  }
  return table;
}

double field_at(const ModeTable& table, double t) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    s += table.amplitudes[i] * std::cos(table.frequencies[i] * t + table.phases[i]);
  }
  return s;
}

double coherence_time(const FieldSpec& spec) {
  if (!(spec.bandwidth > 0.0)) throw ParameterError("bandwidth", "must be > 0");
  return 1.0 / spec.bandwidth;
}

FieldStepper::FieldStepper(const ModeTable& table, double t0, double step,
                           std::size_t resync_interval)
    : omega_(table.frequencies),
      amp_(table.amplitudes),
      phase_(table.phases),
      re_(table.size()),
      im_(table.size()),
      rot_re_(table.size()),
      rot_im_(table.size()),
      t0_(t0),
      step_(step),
      resync_interval_(std::max<std::size_t>(resync_interval, 1)) {
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    rot_re_[i] = std::cos(omega_[i] * step_);
    rot_im_[i] = std::sin(omega_[i] * step_);
  }
  anchor();
}

void FieldStepper::anchor() noexcept {
  const double t = time();
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    const double arg = omega_[i] * t + phase_[i];
    re_[i] = amp_[i] * std::cos(arg);
    im_[i] = amp_[i] * std::sin(arg);
  }
  value_ = sum_real();
}

double FieldStepper::sum_real() const noexcept {
  // Four fixed lanes; the summation order is part of the reproducibility
  // contract, so no reassociation flags are used.
  const std::size_t n = re_.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += re_[i];
    s1 += re_[i + 1];
    s2 += re_[i + 2];
    s3 += re_[i + 3];
  }
  for (; i < n; ++i) s0 += re_[i];
  return (s0 + s1) + (s2 + s3);
}

void FieldStepper::advance() noexcept {
  ++k_;
  if (k_ % resync_interval_ == 0) {
    anchor();
    return;
  }
  const std::size_t n = re_.size();
  double* re = re_.data();
  double* im = im_.data();
  const double* cr = rot_re_.data();
  const double* ci = rot_im_.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = re[i] * cr[i] - im[i] * ci[i];
    const double m = re[i] * ci[i] + im[i] * cr[i];
    re[i] = r;
    im[i] = m;
  }
  value_ = sum_real();
}

void write_csv(std::ostream& out, const ModeTable& table) {
  CsvWriter csv(out);
  csv.header({"index", "frequency", "amplitude", "phase"});
  for (std::size_t i = 0; i < table.size(); ++i) {
    csv.row_values(i, table.frequencies[i], table.amplitudes[i], table.phases[i]);
  }
}

}  // namespace sedlab
