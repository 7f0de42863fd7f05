#include "sedlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "sedlab/csv.hpp"
#include "sedlab/errors.hpp"
#include "sedlab/random.hpp"

namespace sedlab {

void EnsembleSpec::validate() const {
  if (n_members < 1) throw ParameterError("n_members", "must be >= 1");
  if (!(t_transient >= 0.0) || !std::isfinite(t_transient)) {
    throw ParameterError("t_transient", "must be finite and >= 0");
  }
  if (!(t_measure > 0.0) || !std::isfinite(t_measure)) {
    throw ParameterError("t_measure", "must be finite and > 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt", "must be finite and > 0");
  if (sample_stride < 1) throw ParameterError("sample_stride", "must be >= 1");
  if (!std::isfinite(x0)) throw ParameterError("x0", "must be finite");
  if (!std::isfinite(v0)) throw ParameterError("v0", "must be finite");
}

std::vector<std::string> EnsembleSpec::warnings(double linewidth) const {
  std::vector<std::string> out;
  if (linewidth > 0.0 && t_transient < 5.0 / linewidth) {
    out.emplace_back("t_transient " + format_double(t_transient) +
                     " is shorter than 5 relaxation times (" + format_double(5.0 / linewidth) + ")");
  }
  return out;
}

std::uint64_t member_seed(std::uint64_t base_seed, std::size_t index) noexcept {
  return derive_seed(base_seed, index);
}

std::vector<Trajectory> run_ensemble(const OscillatorParams& params, const FieldSpec* field_spec,
                                     const PulseSpec* pulse, const EnsembleSpec& ens,
                                     unsigned threads) {
  ens.validate();
  if (field_spec != nullptr) field_spec->validate();

  std::vector<Trajectory> out(ens.n_members);
  detail::parallel_for(ens.n_members, threads, [&](std::size_t i) {
    std::optional<ModeTable> table;
    if (field_spec != nullptr) {
      FieldSpec member = *field_spec;
      member.seed = member_seed(ens.base_seed, i);
      table = synthesize_modes(member);
    }
    IntegrationOptions opts;
    opts.dt = ens.dt;
    opts.stride = ens.sample_stride;
    opts.record_from = ens.t_transient;
    try {
      out[i] = integrate_trajectory(params, table ? &*table : nullptr, pulse, {ens.x0, ens.v0},
                                    {0.0, ens.t_transient + ens.t_measure}, opts);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.step(), i);
    }
  });
  return out;
}

namespace {

template <typename Visit>
void for_each_in_window(std::span<const Trajectory> trajs, TimeWindow window, Visit&& visit) {
  if (trajs.empty()) throw ParameterError("trajectories", "empty ensemble");
  if (!(window.end >= window.begin)) throw ParameterError("window", "end precedes begin");
  std::size_t count = 0;
  for (std::size_t m = 0; m < trajs.size(); ++m) {
    const Trajectory& tr = trajs[m];
    if (tr.samples.empty()) continue;
    const double tol = 1e-6 * std::max(tr.dt, 1e-300);
    // the end may overhang the last sample by less than one sample interval
    if (window.begin < tr.t0 - tol || window.end > tr.t_end() + tr.dt - tol) {
      throw ParameterError("window", "lies outside the sampled span of member " + std::to_string(m));
    }
    std::size_t first = 0;
    if (tr.dt > 0.0) {
      const double f = std::ceil((window.begin - tr.t0 - tol) / tr.dt);
      first = f > 0.0 ? static_cast<std::size_t>(f) : 0;
    }
    for (std::size_t k = first; k < tr.samples.size(); ++k) {
      if (tr.time_at(k) > window.end + tol) break;
      visit(m, tr, tr.samples[k]);
      ++count;
    }
  }
  if (count == 0) throw ParameterError("window", "contains no samples");
}

HistogramRange default_range(const Moments& m, std::span<const double> samples) {
  double dev = 0.0;
  for (double s : samples) dev = std::max(dev, std::abs(s - m.mean));
  double half = std::max(5.0 * std::sqrt(m.variance), dev);
  if (!(half > 0.0)) half = std::max(1.0, std::abs(m.mean));
  half *= 1.0 + 1e-12;
  return {m.mean - half, m.mean + half};
}

DistributionStats distribution_of(std::span<const double> samples, const HistogramOptions& options) {
  if (options.bins < 10) throw ParameterError("bins", "must be >= 10");
  DistributionStats stats;
  const Moments m = moments(samples);
  stats.mean = m.mean;
  stats.variance = m.variance;
  stats.sigma = std::sqrt(m.variance);
  stats.n_samples = m.count;
  const HistogramRange range = options.range ? *options.range : default_range(m, samples);
  stats.histogram = make_histogram(samples, options.bins, range, &stats.n_outside);
  return stats;
}

}  // namespace

std::vector<double> collect_positions(std::span<const Trajectory> trajs, TimeWindow window) {
  std::vector<double> out;
  for_each_in_window(trajs, window, [&](std::size_t, const Trajectory&, const PhaseSample& s) {
    out.push_back(s.x);
  });
  return out;
}

std::vector<double> collect_momenta(std::span<const Trajectory> trajs, TimeWindow window) {
  std::vector<double> out;
  for_each_in_window(trajs, window, [&](std::size_t, const Trajectory& tr, const PhaseSample& s) {
    out.push_back(tr.params.mass * s.v);
  });
  return out;
}

DistributionStats position_distribution(std::span<const Trajectory> trajs, TimeWindow window,
                                        const HistogramOptions& options) {
  const auto samples = collect_positions(trajs, window);
  return distribution_of(samples, options);
}

DistributionStats momentum_distribution(std::span<const Trajectory> trajs, TimeWindow window,
                                        const HistogramOptions& options) {
  const auto samples = collect_momenta(trajs, window);
  return distribution_of(samples, options);
}

double uncertainty_product(const DistributionStats& position,
                           const DistributionStats& momentum) noexcept {
  return position.sigma * momentum.sigma;
}

double mean_energy(std::span<const Trajectory> trajs, TimeWindow window) {
  double sum = 0.0;
  std::size_t n = 0;
  for_each_in_window(trajs, window, [&](std::size_t, const Trajectory& tr, const PhaseSample& s) {
    const double w2 = tr.params.omega0 * tr.params.omega0;
    sum += 0.5 * tr.params.mass * (s.v * s.v + w2 * s.x * s.x);
    ++n;
  });
  return sum / static_cast<double>(n);
}

PhaseSpaceSummary summarize(std::span<const Trajectory> trajs, TimeWindow window) {
  const auto xs = collect_positions(trajs, window);
  const auto ps = collect_momenta(trajs, window);
  const Moments mx = moments(xs);
  const Moments mp = moments(ps);
  PhaseSpaceSummary s;
  s.sigma_x = std::sqrt(mx.variance);
  s.sigma_p = std::sqrt(mp.variance);
  s.uncertainty_product = s.sigma_x * s.sigma_p;
  s.mean_energy = mean_energy(trajs, window);
  s.n_samples = mx.count;
  return s;
}

MeanEstimate mean_with_error(std::span<const double> per_member) noexcept {
  MeanEstimate e;
  if (per_member.empty()) return e;
  const Moments m = moments(per_member);
  e.mean = m.mean;
  const double n = static_cast<double>(per_member.size());
  if (per_member.size() > 1) e.stderr_mean = std::sqrt(m.variance * n / (n - 1.0) / n);
  return e;
}

namespace {

template <typename Value>
std::vector<double> per_member(std::span<const Trajectory> trajs, TimeWindow window, Value&& value) {
  std::vector<double> sums(trajs.size(), 0.0);
  std::vector<std::size_t> counts(trajs.size(), 0);
  for_each_in_window(trajs, window, [&](std::size_t m, const Trajectory& tr, const PhaseSample& s) {
    sums[m] += value(tr, s);
    ++counts[m];
  });
  std::vector<double> out;
  for (std::size_t m = 0; m < trajs.size(); ++m) {
    if (counts[m] > 0) out.push_back(sums[m] / static_cast<double>(counts[m]));
  }
  return out;
}

}  // namespace

std::vector<double> member_mean_square_position(std::span<const Trajectory> trajs, TimeWindow window) {
  return per_member(trajs, window, [](const Trajectory&, const PhaseSample& s) { return s.x * s.x; });
}

std::vector<double> member_mean_energy(std::span<const Trajectory> trajs, TimeWindow window) {
  return per_member(trajs, window, [](const Trajectory& tr, const PhaseSample& s) {
    const double w2 = tr.params.omega0 * tr.params.omega0;
    return 0.5 * tr.params.mass * (s.v * s.v + w2 * s.x * s.x);
  });
}

DistributionStats envelope_normalized_distribution(std::span<const Trajectory> trajs,
                                                   TimeWindow window, double segment_length,
                                                   const HistogramOptions& options) {
  if (!(segment_length > 0.0)) throw ParameterError("segment_length", "must be > 0");
  // Gather each member's in-window samples first, then segment them.
  std::vector<std::vector<PhaseSample>> windowed(trajs.size());
  for_each_in_window(trajs, window, [&](std::size_t m, const Trajectory&, const PhaseSample& s) {
    windowed[m].push_back(s);
  });
  std::vector<double> normalized;
  for (std::size_t m = 0; m < trajs.size(); ++m) {
    const Trajectory& tr = trajs[m];
    const auto& w = windowed[m];
    const std::size_t per_segment = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(segment_length / std::max(tr.dt, 1e-300))));
    const double inv_w0 = 1.0 / tr.params.omega0;
    for (std::size_t start = 0; start + per_segment <= w.size(); start += per_segment) {
      double amp = 0.0;
      for (std::size_t k = start; k < start + per_segment; ++k) {
        amp += std::hypot(w[k].x, w[k].v * inv_w0);
      }
      amp /= static_cast<double>(per_segment);
      if (!(amp > 0.0)) continue;
      for (std::size_t k = start; k < start + per_segment; ++k) normalized.push_back(w[k].x / amp);
    }
  }
  if (normalized.empty()) throw ParameterError("segment_length", "no complete segment in window");
  HistogramOptions opts = options;
  if (!opts.range) opts.range = HistogramRange{-1.5, 1.5};
  return distribution_of(normalized, opts);
}

Bimodality bimodality(const Histogram& hist, double turning_lo, double turning_hi) {
  Bimodality b;
  double turning_sum = 0.0;
  std::size_t turning_bins = 0;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    if (hist.edges[i] <= 0.0 && 0.0 < hist.edges[i + 1]) b.central_density = hist.densities[i];
    const double c = std::abs(hist.center(i));
    if (c >= turning_lo && c <= turning_hi) {
      turning_sum += hist.densities[i];
      ++turning_bins;
    }
  }
  if (turning_bins > 0) b.turning_density = turning_sum / static_cast<double>(turning_bins);
  b.bimodal = b.central_density < 0.8 * b.turning_density;
  return b;
}

std::size_t ExcitationSpectrum::argmax() const noexcept {
  return static_cast<std::size_t>(
      std::distance(mean_energy.begin(), std::max_element(mean_energy.begin(), mean_energy.end())));
}

ExcitationSpectrum excitation_spectrum(const OscillatorParams& params, const FieldSpec* field_spec,
                                       const PulseSpec& pulse_template,
                                       std::span<const double> grid, const EnsembleSpec& ens,
                                       const SpectrumOptions& options) {
  params.validate(/*allow_undamped=*/true);
  ens.validate();
  if (field_spec != nullptr) field_spec->validate();
  PulseSpec pulse = pulse_template;
  pulse.enabled = true;
  pulse.validate();
  if (grid.empty()) throw ParameterError("grid", "must contain at least one carrier frequency");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw ParameterError("grid", "carrier frequencies must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ParameterError("grid", "must be strictly ascending");
  }
  const double period = 2.0 * std::numbers::pi / params.omega0;
  if (ens.t_measure < 20.0 * period * (1.0 - 1e-12)) {
    throw ParameterError("t_measure", "post-pulse window must cover at least 20 oscillator periods");
  }
  const double baseline_len = options.baseline_measure.value_or(ens.t_measure);
  if (!(baseline_len > 0.0)) throw ParameterError("baseline_measure", "must be > 0");

  ExcitationSpectrum out;
  out.omega_p.assign(grid.begin(), grid.end());
  out.ensemble = ens;
  if (grid.front() > 0.5 * params.omega0 || grid.back() < 3.5 * params.omega0) {
    out.warnings.emplace_back("carrier grid does not span [0.5 w0, 3.5 w0]");
  }

  pulse.t_center = ens.t_transient + 8.0 * pulse.sigma_t;
  out.pulse = pulse;
  out.pulse_center = pulse.t_center;
  const double w_begin = pulse.t_center + 5.0 * pulse.sigma_t;
  out.window = {w_begin, w_begin + ens.t_measure};
  out.baseline_window = {w_begin, w_begin + baseline_len};

  std::optional<ModeTable> probe;
  if (field_spec != nullptr) probe = synthesize_modes(*field_spec);
  PulseSpec fastest = pulse;
  fastest.omega_p = grid.back();
  const double limit = max_stable_step(params, probe ? &*probe : nullptr, &fastest);
  if (ens.dt > limit) {
    throw ParameterError("dt", "step " + format_double(ens.dt) + " exceeds 2 pi / (20 w_max) = " +
                                   format_double(limit));
  }

  const double dt = ens.dt;
  const std::size_t n_prefix = step_count(ens.t_transient, dt);
  auto first_step = [dt](double t) {
    return static_cast<std::size_t>(std::ceil(t / dt * (1.0 - 1e-12) - 1e-9));
  };
  const std::size_t k_begin = first_step(out.window.begin);
  const std::size_t k_end = step_count(out.window.end, dt);
  const std::size_t kb_end = step_count(out.baseline_window.end, dt);

  const std::size_t n_grid = grid.size();
  // Row m holds member m's energies: grid points followed by the baseline.
  std::vector<double> energies(ens.n_members * (n_grid + 1), 0.0);

  auto measure = [&](OscillatorIntegrator integ, std::size_t last) {
    double sum = 0.0;
    std::size_t count = 0;
    while (integ.steps() < last) {
      integ.step();
      if (integ.steps() >= k_begin) {
        sum += integ.energy();
        ++count;
      }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
  };

  detail::parallel_for(ens.n_members, options.threads, [&](std::size_t m) {
    std::optional<ModeTable> table;
    if (field_spec != nullptr) {
      FieldSpec member = *field_spec;
      member.seed = member_seed(ens.base_seed, m);
      table = synthesize_modes(member);
    }
    try {
      OscillatorIntegrator prefix(params, table ? &*table : nullptr, std::nullopt, {ens.x0, ens.v0},
                                  0.0, dt);
      while (prefix.steps() < n_prefix) prefix.step();
      double* row = &energies[m * (n_grid + 1)];
      for (std::size_t g = 0; g < n_grid; ++g) {
        OscillatorIntegrator fork = prefix;
        PulseSpec p = pulse;
        p.omega_p = grid[g];
        fork.set_pulse(p);
        row[g] = measure(std::move(fork), k_end);
      }
      row[n_grid] = measure(prefix, kb_end);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.step(), m);
    }
  });

  std::vector<double> column(ens.n_members);
  auto reduce = [&](std::size_t g) {
    for (std::size_t m = 0; m < ens.n_members; ++m) column[m] = energies[m * (n_grid + 1) + g];
    return mean_with_error(column);
  };
  out.mean_energy.resize(n_grid);
  out.stderr_energy.resize(n_grid);
  for (std::size_t g = 0; g < n_grid; ++g) {
    const MeanEstimate e = reduce(g);
    out.mean_energy[g] = e.mean;
    out.stderr_energy[g] = e.stderr_mean;
  }
  const MeanEstimate b = reduce(n_grid);
  out.baseline = b.mean;
  out.baseline_stderr = b.stderr_mean;
  return out;
}

void write_csv(std::ostream& out, const ExcitationSpectrum& spectrum) {
  CsvWriter csv(out);
  csv.header({"omega_p", "mean_energy"});
  for (std::size_t i = 0; i < spectrum.omega_p.size(); ++i) {
    csv.row({spectrum.omega_p[i], spectrum.mean_energy[i]});
  }
}

}  // namespace sedlab
