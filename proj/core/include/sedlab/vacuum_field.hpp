#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace sedlab {

/// Parameters of the synthesized zero-point field and of the particle it
/// drives. Units are arbitrary but consistent; the defaults are the
/// nondimensional set m = q = hbar = omega0 = 1.
struct FieldSpec {
  double omega0 = 1.0;
  double gamma_rad = 1e-3;  ///< radiation-damping time constant Gamma
  double mass = 1.0;
  double charge = 1.0;
  double hbar = 1.0;
  double bandwidth = 0.05;  ///< full spectral window centered on omega0
  std::size_t n_modes = 300;
  std::uint64_t seed = 0;

  /// Resonance linewidth gamma = Gamma * omega0^2.
  double linewidth() const noexcept { return gamma_rad * omega0 * omega0; }

  /// Throws ParameterError naming the first offending field.
  void validate() const;

  /// Soft violations, e.g. a window narrower than 10 linewidths.
  std::vector<std::string> warnings() const;
};

/// One-sided zero-point spectral density S(omega) = m hbar Gamma omega^3 / q^2,
/// normalized so that <E^2> = (1/pi) * integral of S over the window.
double spectral_density(const FieldSpec& spec, double omega) noexcept;

/// Frozen discrete-mode realization E(t) = sum_i A_i cos(w_i t + phi_i).
/// Immutable after synthesis and safe to share between threads.
struct ModeTable {
  std::vector<double> frequencies;  ///< ascending
  std::vector<double> amplitudes;
  std::vector<double> phases;       ///< in [0, 2 pi)
  FieldSpec spec;

  std::size_t size() const noexcept { return frequencies.size(); }
  /// Long-time average of E(t)^2, i.e. sum A_i^2 / 2.
  double mean_square() const noexcept;
  double max_frequency() const noexcept;
  double amplitude_sum() const noexcept;
};

/// One mode per equal-width bin of width bandwidth/n_modes, placed at a
/// uniformly jittered position inside its bin (no recurrence at 2 pi/dw).
/// Phases are i.i.d. uniform. Bit-identical for identical specs.
ModeTable synthesize_modes(const FieldSpec& spec);

/// Direct evaluation of the finite cosine sum.
double field_at(const ModeTable& table, double t) noexcept;

/// 1 / bandwidth.
double coherence_time(const FieldSpec& spec);

/// Incremental evaluation of the field on a uniform time grid
/// t_k = t0 + k * step by rotating per-mode phasors. Every
/// `resync_interval` steps the phasors are re-anchored from the exact
/// cosine sum so the accumulated rounding stays at the 1e-13 level.
class FieldStepper {
 public:
  FieldStepper() = default;
  FieldStepper(const ModeTable& table, double t0, double step,
               std::size_t resync_interval = 1024);

  double value() const noexcept { return value_; }
  double time() const noexcept { return t0_ + static_cast<double>(k_) * step_; }
  std::size_t index() const noexcept { return k_; }
  void advance() noexcept;
  bool empty() const noexcept { return re_.empty(); }

 private:
  void anchor() noexcept;
  double sum_real() const noexcept;

  std::vector<double> omega_;
  std::vector<double> amp_;
  std::vector<double> phase_;
  std::vector<double> re_, im_;
  std::vector<double> rot_re_, rot_im_;
  double t0_ = 0.0;
  double step_ = 0.0;
  std::size_t k_ = 0;
  std::size_t resync_interval_ = 1024;
  double value_ = 0.0;
};

/// CSV with columns index,frequency,amplitude,phase.
void write_csv(std::ostream& out, const ModeTable& table);

}  // namespace sedlab
