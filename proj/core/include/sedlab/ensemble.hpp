#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sedlab/dynamics.hpp"
#include "sedlab/statistics.hpp"
#include "sedlab/vacuum_field.hpp"

namespace sedlab {

struct EnsembleSpec {
  std::size_t n_members = 1;
  double t_transient = 1e4;
  double t_measure = 2e5;
  double dt = 0.1;
  std::size_t sample_stride = 1;
  std::uint64_t base_seed = 0;
  double x0 = 0.0;
  double v0 = 0.0;

  void validate() const;
  /// Warns when the transient is shorter than 5 relaxation times 1/gamma.
  std::vector<std::string> warnings(double linewidth) const;
};

/// Field seed of ensemble member `index`.
std::uint64_t member_seed(std::uint64_t base_seed, std::size_t index) noexcept;

/// Runs `ens.n_members` independent oscillators, each driven by its own
/// ModeTable synthesized from member_seed(base_seed, i). Trajectories are
/// recorded over [t_transient, t_transient + t_measure] and returned in member
/// order; the result does not depend on `threads`. `field_spec` null means no
/// vacuum field. Divergence errors are rethrown with the member index.
std::vector<Trajectory> run_ensemble(const OscillatorParams& params, const FieldSpec* field_spec,
                                     const PulseSpec* pulse, const EnsembleSpec& ens,
                                     unsigned threads = 1);

struct TimeWindow {
  double begin;
  double end;
};

struct HistogramOptions {
  std::size_t bins = 101;
  /// Defaults to mean +- max(5 sigma, largest deviation).
  std::optional<HistogramRange> range;
};

struct DistributionStats {
  Histogram histogram;
  double mean = 0.0;
  double variance = 0.0;
  double sigma = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_outside = 0;
};

/// Pooled samples of all members inside `window`, in member-major order.
std::vector<double> collect_positions(std::span<const Trajectory> trajs, TimeWindow window);
/// Momenta p = m v.
std::vector<double> collect_momenta(std::span<const Trajectory> trajs, TimeWindow window);

DistributionStats position_distribution(std::span<const Trajectory> trajs, TimeWindow window,
                                        const HistogramOptions& options = {});
DistributionStats momentum_distribution(std::span<const Trajectory> trajs, TimeWindow window,
                                        const HistogramOptions& options = {});

/// sigma_x * sigma_p.
double uncertainty_product(const DistributionStats& position, const DistributionStats& momentum) noexcept;

/// Time-and-ensemble average of m v^2 / 2 + m w0^2 x^2 / 2.
double mean_energy(std::span<const Trajectory> trajs, TimeWindow window);

struct PhaseSpaceSummary {
  double sigma_x = 0.0;
  double sigma_p = 0.0;
  double uncertainty_product = 0.0;
  double mean_energy = 0.0;
  std::size_t n_samples = 0;
};

PhaseSpaceSummary summarize(std::span<const Trajectory> trajs, TimeWindow window);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;  ///< sample standard deviation / sqrt(n); 0 for n = 1
};

/// Mean over members of a per-member value, with its standard error.
MeanEstimate mean_with_error(std::span<const double> per_member) noexcept;

/// Per-member window averages of x^2 and of the energy.
std::vector<double> member_mean_square_position(std::span<const Trajectory> trajs, TimeWindow window);
std::vector<double> member_mean_energy(std::span<const Trajectory> trajs, TimeWindow window);

/// Splits each member's window into consecutive segments of `segment_length`
/// and pools x / A_seg, where A_seg is the segment mean of the instantaneous
/// amplitude sqrt(x^2 + (v/w0)^2). For segments much shorter than the
/// amplitude correlation time this is the single-frequency (arcsine) shape;
/// for long segments it is the Gaussian envelope mixture.
DistributionStats envelope_normalized_distribution(std::span<const Trajectory> trajs,
                                                   TimeWindow window, double segment_length,
                                                   const HistogramOptions& options = {});

struct Bimodality {
  double central_density = 0.0;
  double turning_density = 0.0;
  bool bimodal = false;
};

/// Compares the density of the bin containing 0 with the mean density of the
/// bins whose centers lie in the turning-point band |u| in [lo, hi].
/// Bimodal when central < 0.8 * turning.
Bimodality bimodality(const Histogram& hist, double turning_lo = 0.8, double turning_hi = 1.0);

struct SpectrumOptions {
  /// Length of the pulse-free baseline window; defaults to ens.t_measure.
  std::optional<double> baseline_measure;
  unsigned threads = 1;
};

struct ExcitationSpectrum {
  std::vector<double> omega_p;
  std::vector<double> mean_energy;
  std::vector<double> stderr_energy;
  double baseline = 0.0;
  double baseline_stderr = 0.0;
  double pulse_center = 0.0;
  TimeWindow window{0.0, 0.0};
  TimeWindow baseline_window{0.0, 0.0};
  EnsembleSpec ensemble;
  PulseSpec pulse;
  std::vector<std::string> warnings;

  std::size_t argmax() const noexcept;
};

/// Carrier sweep of the ensemble-mean post-pulse energy.
///
/// Each member is integrated pulse-free through the transient once; the state
/// is then forked for every carrier. The pulse is centered at
/// t_c = t_transient + 8 sigma_t and switched on at t_transient, where its
/// envelope is e^-32 of the peak. Energy is averaged over
/// [t_c + 5 sigma_t, t_c + 5 sigma_t + t_measure]; t_measure must cover at
/// least 20 oscillator periods. The baseline is the same pulse-free member
/// continued over the baseline window starting at the same time.
ExcitationSpectrum excitation_spectrum(const OscillatorParams& params, const FieldSpec* field_spec,
                                       const PulseSpec& pulse_template,
                                       std::span<const double> grid, const EnsembleSpec& ens,
                                       const SpectrumOptions& options = {});

/// CSV with columns omega_p,mean_energy.
void write_csv(std::ostream& out, const ExcitationSpectrum& spectrum);

}  // namespace sedlab
