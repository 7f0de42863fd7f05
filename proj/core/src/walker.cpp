#include "sedlab/walker.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "sedlab/csv.hpp"
#include "sedlab/errors.hpp"

namespace sedlab {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

Vec2 rotate(Vec2 p, double c, double s) { return {c * p.x - s * p.y, s * p.x + c * p.y}; }

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

}  // namespace

void SlitGeometry::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("width", "must be finite and > 0");
  if (!(faraday_wavelength > 0.0) || !std::isfinite(faraday_wavelength)) {
    throw ParameterError("faraday_wavelength", "must be finite and > 0");
  }
  if (eval_radius && (!(*eval_radius > 0.0) || !std::isfinite(*eval_radius))) {
    throw ParameterError("eval_radius", "must be finite and > 0");
  }
  const std::size_t expected = kind == SlitKind::single ? 1 : 2;
  if (centers.size() != expected) {
    throw ParameterError("centers", kind == SlitKind::single ? "single slit needs one center"
                                                             : "double slit needs two centers");
  }
  for (double c : centers) {
    if (!std::isfinite(c)) throw ParameterError("centers", "must be finite");
  }
  if (kind == SlitKind::double_slit && centers[0] == centers[1]) {
    throw ParameterError("centers", "double-slit centers must be distinct");
  }
  if (!std::isfinite(barrier_x) || !std::isfinite(barrier_y) || !std::isfinite(axis_angle)) {
    throw ParameterError("barrier", "position and axis angle must be finite");
  }
}

Vec2 SlitGeometry::axis() const noexcept { return {std::cos(axis_angle), std::sin(axis_angle)}; }
Vec2 SlitGeometry::normal() const noexcept { return {-std::sin(axis_angle), std::cos(axis_angle)}; }

Vec2 SlitGeometry::center_point(std::size_t slit) const noexcept {
  return Vec2{barrier_x, barrier_y} + centers[slit] * normal();
}

SlitGeometry rotated(const SlitGeometry& geom, double phi) {
  SlitGeometry g = geom;
  const Vec2 p = rotate({geom.barrier_x, geom.barrier_y}, std::cos(phi), std::sin(phi));
  g.barrier_x = p.x;
  g.barrier_y = p.y;
  g.axis_angle = geom.axis_angle + phi;
  return g;
}

WalkerTrajectory rotated(const WalkerTrajectory& traj, double phi) {
  WalkerTrajectory out = traj;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (auto& p : out.samples) {
    const Vec2 r = rotate({p.x, p.y}, c, s);
    p.x = r.x;
    p.y = r.y;
  }
  return out;
}

std::optional<ExitCrossing> find_exit(const WalkerTrajectory& traj, const SlitGeometry& geom) {
  geom.validate();
  const auto& pts = traj.samples;
  if (pts.empty()) return std::nullopt;
  const Vec2 axis = geom.axis();
  const Vec2 normal = geom.normal();
  const Vec2 origin{geom.barrier_x, geom.barrier_y};

  // Where does the walker cross the barrier plane?
  std::optional<std::size_t> passed;
  double lateral = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vec2 p{pts[k].x, pts[k].y};
    const double u = dot(p - origin, axis);
    if (u >= 0.0) {
      passed = k;
      Vec2 hit = p;
      if (k > 0) {
        const Vec2 q{pts[k - 1].x, pts[k - 1].y};
        const double uq = dot(q - origin, axis);
        const double s = uq / (uq - u);
        hit = q + s * (p - q);
      }
      lateral = dot(hit - origin, normal);
      break;
    }
  }
  if (!passed) return std::nullopt;

  std::size_t slit = 0;
  for (std::size_t k = 1; k < geom.centers.size(); ++k) {
    if (std::abs(lateral - geom.centers[k]) < std::abs(lateral - geom.centers[slit])) slit = k;
  }
  const Vec2 center = geom.center_point(slit);
  const double r = geom.radius();

  const std::size_t start = *passed > 0 ? *passed - 1 : 0;
  for (std::size_t k = start; k + 1 < pts.size(); ++k) {
    const Vec2 a = Vec2{pts[k].x, pts[k].y} - center;
    const Vec2 d = Vec2{pts[k + 1].x, pts[k + 1].y} - Vec2{pts[k].x, pts[k].y};
    const double qa = dot(d, d);
    if (qa == 0.0) continue;
    const double qb = 2.0 * dot(a, d);
    const double qc = dot(a, a) - r * r;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) continue;
    // Outward crossing is the larger root; the stable form avoids cancellation.
    const double sq = std::sqrt(disc);
    const double s_out = qb >= 0.0 ? (2.0 * qc) / (-qb - sq) : (-qb + sq) / (2.0 * qa);
    if (!(s_out >= 0.0 && s_out <= 1.0)) continue;
    const Vec2 rel = a + s_out * d;
    const double u = dot(rel, axis);
    if (u < 0.0) continue;
    const double w = dot(rel, normal);
    return ExitCrossing{std::atan2(w, u), std::atan2(rel.y, rel.x), center + rel, slit};
  }
  return std::nullopt;
}

std::optional<double> exit_angle(const WalkerTrajectory& traj, const SlitGeometry& geom) {
  const auto c = find_exit(traj, geom);
  if (!c) return std::nullopt;
  return c->angle;
}

std::optional<double> initial_heading(const WalkerTrajectory& traj, const SlitGeometry& geom) {
  const auto& pts = traj.samples;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const Vec2 d{pts[k].x - pts[0].x, pts[k].y - pts[0].y};
    if (d.x != 0.0 || d.y != 0.0) return std::atan2(dot(d, geom.normal()), dot(d, geom.axis()));
  }
  return std::nullopt;
}

AngularDistribution angular_histogram(std::span<const double> angles, std::size_t bins,
                                      bool symmetrize, double eval_radius) {
  if (angles.empty()) throw ParameterError("angles", "need at least one angle");
  if (bins < 1) throw ParameterError("bins", "must be >= 1");
  const double lo = -kHalfPi;
  const double width = std::numbers::pi / static_cast<double>(bins);

  std::vector<double> weight(bins, 0.0);
  double total = 0.0;
  for (double theta : angles) {
    if (!(theta >= lo && theta <= kHalfPi)) continue;
    auto i = static_cast<std::size_t>((theta - lo) / width);
    if (i >= bins) i = bins - 1;
    if (symmetrize) {
      weight[i] += 0.5;
      weight[bins - 1 - i] += 0.5;
    } else {
      weight[i] += 1.0;
    }
    total += 1.0;
  }
  if (total == 0.0) throw ParameterError("angles", "no angle inside [-pi/2, pi/2]");

  AngularDistribution out;
  out.symmetrized = symmetrize;
  out.eval_radius = eval_radius;
  auto& h = out.histogram;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + static_cast<double>(i) * width;
  h.edges.back() = kHalfPi;
  // Mirror edges exactly so the bin layout itself is symmetric.
  for (std::size_t i = 0; i < bins / 2 + 1; ++i) h.edges[bins - i] = -h.edges[i];
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = weight[i] / (total * width);
  return out;
}

double predicted_peak_angle(const SlitGeometry& geom) {
  geom.validate();
  return geom.faraday_wavelength / geom.width;
}

std::vector<double> single_slit_fit(std::span<const double> theta, const SlitGeometry& geom,
                                    double amplitude) {
  geom.validate();
  const double ratio = geom.width / geom.faraday_wavelength;
  std::vector<double> out;
  out.reserve(theta.size());
  for (double th : theta) out.push_back(amplitude * std::abs(sinc(std::numbers::pi * ratio * std::sin(th))));
  return out;
}

AngularLaw AngularLaw::delta(double angle) {
  if (!(angle >= -kHalfPi && angle <= kHalfPi)) {
    throw ParameterError("law", "angle must lie in [-pi/2, pi/2]");
  }
  AngularLaw law;
  law.kind_ = Kind::delta;
  law.lo_ = law.hi_ = angle;
  return law;
}

AngularLaw AngularLaw::uniform(double lo, double hi) {
  if (!(lo < hi) || lo < -kHalfPi || hi > kHalfPi) {
    throw ParameterError("law", "uniform support must be a non-empty subset of [-pi/2, pi/2]");
  }
  AngularLaw law;
  law.kind_ = Kind::uniform;
  law.lo_ = lo;
  law.hi_ = hi;
  return law;
}

AngularLaw AngularLaw::tabulated(const std::function<double(double)>& density, double lo, double hi,
                                 std::size_t points) {
  if (!(lo < hi) || lo < -kHalfPi || hi > kHalfPi) {
    throw ParameterError("law", "support must be a non-empty subset of [-pi/2, pi/2]");
  }
  if (points < 2) throw ParameterError("law", "need at least two nodes");
  AngularLaw law;
  law.kind_ = Kind::tabulated;
  law.lo_ = lo;
  law.hi_ = hi;
  law.nodes_.resize(points);
  law.cumulative_.resize(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  double prev = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + static_cast<double>(i) * h;
    const double f = density(x);
    if (!std::isfinite(f) || f < 0.0) {
      throw ParameterError("law", "density must be finite and non-negative (at " + format_double(x) + ")");
    }
    law.nodes_[i] = x;
    law.cumulative_[i] = i == 0 ? 0.0 : law.cumulative_[i - 1] + 0.5 * (prev + f) * (x - law.nodes_[i - 1]);
    prev = f;
  }
  const double total = law.cumulative_.back();
  if (!(total > 0.0)) throw ParameterError("law", "density integrates to zero");
  for (double& c : law.cumulative_) c /= total;
  law.cumulative_.back() = 1.0;
  return law;
}

double AngularLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::delta:
      return lo_;
    case Kind::uniform:
      return rng.uniform(lo_, hi_);
    case Kind::tabulated: {
      const double u = rng.uniform();
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      std::size_t j = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
      j = std::clamp<std::size_t>(j, 1, cumulative_.size() - 1);
      const double c0 = cumulative_[j - 1];
      const double c1 = cumulative_[j];
      const double s = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
      return nodes_[j - 1] + s * (nodes_[j] - nodes_[j - 1]);
    }
  }
  return lo_;
}

double AngularLaw::cdf(double angle) const {
  switch (kind_) {
    case Kind::delta:
      return angle >= lo_ ? 1.0 : 0.0;
    case Kind::uniform:
      return std::clamp((angle - lo_) / (hi_ - lo_), 0.0, 1.0);
    case Kind::tabulated: {
      if (angle <= lo_) return 0.0;
      if (angle >= hi_) return 1.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), angle);
      const std::size_t j = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
      const double s = (angle - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
      return cumulative_[j - 1] + s * (cumulative_[j] - cumulative_[j - 1]);
    }
  }
  return 0.0;
}

AngularLaw lobed_single_slit_law(const SlitGeometry& geom) {
  geom.validate();
  const double ratio = geom.width / geom.faraday_wavelength;
  auto density = [ratio](double theta) {
    const double u = std::numbers::pi * ratio * std::sin(theta);
    const double a = sinc(u - std::numbers::pi);
    const double b = sinc(u + std::numbers::pi);
    return a * a + b * b;
  };
  return AngularLaw::tabulated(density, -kHalfPi, kHalfPi);
}

std::vector<WalkerTrajectory> synthesize_walkers(const SlitGeometry& geom, const AngularLaw& law,
                                                 std::size_t n, double noise, std::uint64_t seed,
                                                 const SynthesisOptions& options) {
  geom.validate();
  if (n < 1) throw ParameterError("n", "must be >= 1");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ParameterError("noise", "must be finite and >= 0");
  if (!(options.speed > 0.0)) throw ParameterError("speed", "must be > 0");
  const double step = options.sample_step.value_or(geom.width / 20.0);
  if (!(step > 0.0)) throw ParameterError("sample_step", "must be > 0");

  const Vec2 axis = geom.axis();
  const Vec2 normal = geom.normal();
  const double r = geom.radius();
  const double upstream = options.upstream * geom.width;
  const double beyond = options.downstream * geom.width;

  std::vector<WalkerTrajectory> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    const std::size_t slit =
        geom.centers.size() > 1 ? static_cast<std::size_t>(rng.uniform() * 2.0) % 2 : 0;
    const Vec2 center = geom.center_point(slit);
    const double offset = rng.uniform(-0.5, 0.5) * geom.width;
    const double theta = law.sample(rng);

    const Vec2 entry = center + offset * normal;
    const Vec2 target = center + r * (std::cos(theta) * axis + std::sin(theta) * normal);
    const Vec2 chord = target - entry;
    const double chord_len = std::sqrt(dot(chord, chord));
    const Vec2 dir = (1.0 / chord_len) * chord;
    const Vec2 start = entry - upstream * axis;
    const double total = upstream + chord_len + beyond;

    WalkerTrajectory& tr = out[i];
    tr.id = static_cast<long long>(i + 1);
    const auto count = static_cast<std::size_t>(std::ceil(total / step)) + 1;
    tr.samples.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double s = std::min(static_cast<double>(k) * step, total);
      const Vec2 p = s <= upstream ? start + s * axis : entry + (s - upstream) * dir;
      WalkerSample w{s / options.speed, p.x, p.y};
      if (noise > 0.0) {
        w.x += rng.normal(0.0, noise);
        w.y += rng.normal(0.0, noise);
      }
      tr.samples.push_back(w);
    }
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct Row {
  WalkerSample sample;
  std::size_t line;
};

}  // namespace

std::vector<WalkerTrajectory> read_trajectories(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      break;
    }
  }
  if (header_line.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "empty file");
  header = split(header_line);

  const char* names[4] = {"id", "t", "x", "y"};
  std::size_t column[4];
  for (int c = 0; c < 4; ++c) {
    auto it = std::find(header.begin(), header.end(), std::string_view(names[c]));
    if (it == header.end()) throw ParseError(line_no, std::string("missing column '") + names[c] + "'");
    column[c] = static_cast<std::size_t>(std::distance(header.begin(), it));
  }
  const std::size_t header_line_no = line_no;

  std::map<long long, std::vector<Row>> groups;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    long long id = 0;
    if (!parse_number(fields[column[0]], id)) throw ParseError(line_no, "non-integer value in column 'id'");
    double v[3];
    for (int c = 1; c < 4; ++c) {
      if (!parse_number(fields[column[c]], v[c - 1]) || !std::isfinite(v[c - 1])) {
        throw ParseError(line_no, std::string("non-numeric value in column '") + names[c] + "'");
      }
    }
    groups[id].push_back({{v[0], v[1], v[2]}, line_no});
  }
  if (groups.empty()) throw ParseError(header_line_no, "no data rows");

  std::vector<WalkerTrajectory> out;
  out.reserve(groups.size());
  for (auto& [id, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.sample.t < b.sample.t; });
    if (rows.size() < 2) {
      throw ParseError(rows.front().line, "trajectory " + std::to_string(id) + " has fewer than 2 samples");
    }
    WalkerTrajectory tr;
    tr.id = id;
    tr.samples.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k > 0 && !(rows[k].sample.t > rows[k - 1].sample.t)) {
        throw ParseError(rows[k].line, "non-monotonic time in trajectory " + std::to_string(id) +
                                           " (duplicate t with line " + std::to_string(rows[k - 1].line) + ")");
      }
      tr.samples.push_back(rows[k].sample);
    }
    out.push_back(std::move(tr));
  }
  return out;
}

std::vector<WalkerTrajectory> load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_trajectories(in);
}

void write_csv(std::ostream& out, std::span<const WalkerTrajectory> trajs) {
  CsvWriter csv(out);
  csv.header({"id", "t", "x", "y"});
  for (const auto& tr : trajs) {
    for (const auto& s : tr.samples) csv.row_values(tr.id, s.t, s.x, s.y);
  }
}

void write_csv(std::ostream& out, const AngularDistribution& dist) {
  write_csv(out, dist.histogram, "bin_left_rad", "bin_right_rad");
}

void write_fit_csv(std::ostream& out, std::span<const double> theta, std::span<const double> value) {
  CsvWriter csv(out);
  csv.header({"theta_rad", "value"});
  for (std::size_t i = 0; i < theta.size() && i < value.size(); ++i) csv.row({theta[i], value[i]});
}

}  // namespace sedlab
