#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sedlab/random.hpp"
#include "sedlab/statistics.hpp"

namespace sedlab {

// Units throughout: seconds and millimetres; angles in radians.

struct WalkerSample {
  double t;
  double x;
  double y;
};

struct WalkerTrajectory {
  long long id = 0;
  std::vector<WalkerSample> samples;  ///< strictly increasing in t
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class SlitKind { single, double_slit };

struct BathInfo {
  double drive_hz = 50.0;
  double viscosity_cst = 20.0;
  double depth_mm = 4.0;
};

/// Submerged barrier with one or two slits. The barrier plane passes through
/// (barrier_x, barrier_y) perpendicular to the slit axis, whose direction is
/// `axis_angle` (0 = +x). Slit centers are offsets along the barrier line,
/// measured along the axis direction rotated by +90 degrees.
struct SlitGeometry {
  SlitKind kind = SlitKind::single;
  std::vector<double> centers{0.0};
  double width = 14.25;
  double barrier_x = 0.0;
  double barrier_y = 0.0;
  double axis_angle = 0.0;
  double faraday_wavelength = 4.75;
  /// Radius of the angle-reading circle; 2 * width when unset.
  std::optional<double> eval_radius;
  BathInfo bath;

  void validate() const;
  double radius() const noexcept { return eval_radius.value_or(2.0 * width); }
  Vec2 axis() const noexcept;
  Vec2 normal() const noexcept;
  Vec2 center_point(std::size_t slit) const noexcept;
};

/// Rotation by `phi` about the coordinate origin.
SlitGeometry rotated(const SlitGeometry& geom, double phi);
WalkerTrajectory rotated(const WalkerTrajectory& traj, double phi);

struct ExitCrossing {
  double angle;    ///< relative to the slit axis, in [-pi/2, pi/2]
  double bearing;  ///< direction of the crossing point from the slit center, lab frame
  Vec2 point;
  std::size_t slit;
};

/// First outward crossing, downstream of the barrier plane, of the circle of
/// radius geom.radius() around the slit the walker passed. Samples are joined
/// by straight segments. Double-slit walkers are assigned to the slit center
/// nearest to where they cross the barrier plane.
std::optional<ExitCrossing> find_exit(const WalkerTrajectory& traj, const SlitGeometry& geom);

std::optional<double> exit_angle(const WalkerTrajectory& traj, const SlitGeometry& geom);

/// Direction of the first non-zero displacement relative to the slit axis.
std::optional<double> initial_heading(const WalkerTrajectory& traj, const SlitGeometry& geom);

struct AngularDistribution {
  Histogram histogram;  ///< edges in radians over [-pi/2, pi/2]
  bool symmetrized = false;
  double eval_radius = 0.0;
};

/// Normalized angle histogram over [-pi/2, pi/2]. With `symmetrize`, each
/// angle adds half weight to its bin and half to the mirrored bin, which makes
/// the densities exactly even.
AngularDistribution angular_histogram(std::span<const double> angles, std::size_t bins,
                                      bool symmetrize, double eval_radius = 0.0);

/// Small-angle diffraction estimate lambda_F / w.
double predicted_peak_angle(const SlitGeometry& geom);

/// Single-slit Fraunhofer amplitude A |sin(u) / u|, u = pi (w/lambda_F) sin(theta).
std::vector<double> single_slit_fit(std::span<const double> theta, const SlitGeometry& geom,
                                    double amplitude);

/// Distribution of exit angles used to synthesize walkers.
class AngularLaw {
 public:
  static AngularLaw delta(double angle);
  static AngularLaw uniform(double lo, double hi);
  /// Density on [lo, hi] tabulated on `points` nodes; the law is the
  /// piecewise-linear CDF through the trapezoid integral. Throws
  /// ParameterError on negative or non-finite density values.
  static AngularLaw tabulated(const std::function<double(double)>& density, double lo, double hi,
                              std::size_t points = 20001);

  double sample(Rng& rng) const;
  double cdf(double angle) const;
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  enum class Kind { delta, uniform, tabulated };
  Kind kind_ = Kind::delta;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

/// Two-lobe law sinc^2(u - pi) + sinc^2(u + pi), u = pi (w/lambda_F) sin(theta):
/// the diffraction envelope shifted so its lobes peak at sin(theta) = +-lambda_F/w.
AngularLaw lobed_single_slit_law(const SlitGeometry& geom);

struct SynthesisOptions {
  double speed = 12.0;                ///< mm/s along the path
  std::optional<double> sample_step;  ///< mm between samples; width/20 when unset
  double upstream = 2.0;              ///< approach length in slit widths
  double downstream = 1.0;            ///< extra length past the reading circle, in widths
};

/// Straight-line walkers: an approach along the slit axis (no divergence), a
/// crossing point on the barrier drawn flat across the slit opening, and a
/// straight exit reaching the reading circle at an angle drawn from `law`.
/// Gaussian positional noise of `noise` mm is added to every sample.
std::vector<WalkerTrajectory> synthesize_walkers(const SlitGeometry& geom, const AngularLaw& law,
                                                 std::size_t n, double noise, std::uint64_t seed,
                                                 const SynthesisOptions& options = {});

/// Reads CSV with header columns id,t,x,y (any order, extra columns ignored).
/// Output is sorted by id and by t within each id. Throws ParseError with the
/// offending line number.
std::vector<WalkerTrajectory> read_trajectories(std::istream& in);
std::vector<WalkerTrajectory> load_trajectories(const std::string& path);

void write_csv(std::ostream& out, std::span<const WalkerTrajectory> trajs);
/// Columns bin_left_rad,bin_right_rad,density.
void write_csv(std::ostream& out, const AngularDistribution& dist);
/// Columns theta_rad,value.
void write_fit_csv(std::ostream& out, std::span<const double> theta, std::span<const double> value);

}  // namespace sedlab
