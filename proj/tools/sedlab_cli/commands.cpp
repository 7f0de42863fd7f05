#include "sedlab_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "sedlab/csv.hpp"
#include "sedlab/dynamics.hpp"
#include "sedlab/ensemble.hpp"
#include "sedlab/errors.hpp"
#include "sedlab/quadrature.hpp"
#include "sedlab/vacuum_field.hpp"
#include "sedlab/walker.hpp"
#include "sedlab/whichpath.hpp"

namespace sedlab::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Schema

void declare_oscillator(RunConfig& c) {
  c.declare("oscillator.mass", "1");
  c.declare("oscillator.charge", "1");
  c.declare("oscillator.omega0", "1");
  c.declare("oscillator.gamma_rad", "0.001");
  c.declare("oscillator.hbar", "1");
  c.declare("field.enabled", "true");
  c.declare("field.bandwidth", "auto");  // auto = 50 linewidths
  c.declare("field.n_modes", "300");
}

void declare_ensemble(RunConfig& c, bool with_stride, const char* n_members, const char* t_measure,
                      const char* dt) {
  c.declare("ensemble.n_members", n_members);
  c.declare("ensemble.t_transient", "10000");
  c.declare("ensemble.t_measure", t_measure);
  c.declare("ensemble.dt", dt);
  c.declare("ensemble.x0", "0");
  c.declare("ensemble.v0", "0");
  if (with_stride) c.declare("ensemble.sample_stride", "10");
}

// ---------------------------------------------------------------------------
// Helpers

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::size_t get_count(const RunConfig& c, const std::string& key, std::int64_t min) {
  const auto v = c.get_int(key);
  if (v < min) throw ConfigError(key, "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

/// Runs `f`, translating module ParameterErrors into ConfigErrors that carry
/// the fully qualified config key.
template <typename F>
auto with_section(const std::string& section, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParameterError& e) {
    throw ConfigError(section + "." + e.key(), e.message());
  }
}

std::string physical_section(const std::string& key) {
  if (key == "bandwidth" || key == "n_modes") return "field";
  if (key == "dt" || key == "t_transient" || key == "t_measure" || key == "n_members" ||
      key == "sample_stride" || key == "x0" || key == "v0") {
    return "ensemble";
  }
  return "oscillator";
}

template <typename F>
auto with_physical_keys(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParameterError& e) {
    throw ConfigError(physical_section(e.key()) + "." + e.key(), e.message());
  }
}

struct SedSetup {
  OscillatorParams params;
  std::optional<FieldSpec> field;
  EnsembleSpec ensemble;
  double hbar = 1.0;
  std::vector<std::string> warnings;
};

SedSetup read_sed_setup(const RunConfig& c, std::uint64_t seed, bool with_stride) {
  SedSetup s;
  s.params.mass = c.get_double("oscillator.mass");
  s.params.charge = c.get_double("oscillator.charge");
  s.params.omega0 = c.get_double("oscillator.omega0");
  s.params.gamma_rad = c.get_double("oscillator.gamma_rad");
  s.hbar = c.get_double("oscillator.hbar");
  const bool field_on = c.get_bool("field.enabled");

  // Gamma = 0 is a meaningful undamped control run only without the field.
  if (field_on && !(s.params.gamma_rad > 0.0)) {
    throw ConfigError("oscillator.gamma_rad", "must be > 0 when the vacuum field is enabled");
  }
  with_physical_keys([&] { s.params.validate(/*allow_undamped=*/!field_on); });
  for (auto& w : s.params.warnings()) s.warnings.push_back(w);

  if (field_on) {
    FieldSpec f;
    f.mass = s.params.mass;
    f.charge = s.params.charge;
    f.omega0 = s.params.omega0;
    f.gamma_rad = s.params.gamma_rad;
    f.hbar = s.hbar;
    const std::string bw = c.get_string("field.bandwidth");
    f.bandwidth = bw == "auto" ? 50.0 * f.linewidth() : c.get_double("field.bandwidth");
    f.n_modes = get_count(c, "field.n_modes", 1);
    f.seed = seed;
    with_physical_keys([&] { f.validate(); });
    for (auto& w : f.warnings()) s.warnings.push_back(w);
    s.field = f;
  }

  EnsembleSpec& e = s.ensemble;
  e.n_members = get_count(c, "ensemble.n_members", 1);
  e.t_transient = c.get_double("ensemble.t_transient");
  e.t_measure = c.get_double("ensemble.t_measure");
  e.dt = c.get_double("ensemble.dt");
  e.x0 = c.get_double("ensemble.x0");
  e.v0 = c.get_double("ensemble.v0");
  if (with_stride) e.sample_stride = get_count(c, "ensemble.sample_stride", 1);
  e.base_seed = seed;
  with_section("ensemble", [&] { e.validate(); });
  if (field_on) {
    for (auto& w : e.warnings(s.params.linewidth())) s.warnings.push_back(w);
  }
  return s;
}

/// CSV text -> {"columns": [...], "rows": [[...], ...]} for --format json.
json csv_to_json(const std::string& csv) {
  json table;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  json rows = json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (header) {
      table["columns"] = fields;
      header = false;
      continue;
    }
    json row = json::array();
    for (const auto& field : fields) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec == std::errc() && ptr == field.data() + field.size()) {
        row.push_back(v);
      } else {
        row.push_back(field);
      }
    }
    rows.push_back(std::move(row));
  }
  table["rows"] = std::move(rows);
  return table;
}

/// Collects tables and the summary; csv mode writes one file per table, json
/// mode embeds the tables in summary.json.
class OutputSink {
 public:
  OutputSink(const std::string& dir, const std::string& format) : dir_(dir), json_mode_(format == "json") {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("out", "cannot create output directory '" + dir + "': " + ec.message());
  }

  void table(const std::string& name, const std::function<void(std::ostream&)>& writer) {
    std::ostringstream ss;
    writer(ss);
    if (json_mode_) {
      tables_[name] = csv_to_json(ss.str());
    } else {
      write_file(name + ".csv", ss.str());
      files_.push_back(name + ".csv");
    }
  }

  void finish(json summary) {
    if (json_mode_) {
      summary["tables"] = std::move(tables_);
    } else {
      summary["files"] = files_;
    }
    write_file("summary.json", summary.dump(2) + "\n");
  }

 private:
  void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot write '" + (dir_ / name).string() + "'");
    out << content;
  }

  fs::path dir_;
  bool json_mode_;
  json tables_ = json::object();
  json files_ = json::array();
};

json provenance(const std::string& subcommand, const RunConfig& c, std::uint64_t seed) {
  json p;
  p["tool"] = "sedlab";
  p["version"] = kVersion;
  p["subcommand"] = subcommand;
  p["seed"] = seed;
  p["config"] = c.resolved();
  return p;
}

std::optional<double> ks_or_null(const std::vector<double>& samples, const Cdf& cdf) {
  if (samples.size() < 100) return std::nullopt;
  return ks_distance(samples, cdf);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------------------
// Subcommands

int cmd_sed_run(const RunConfig& c, std::uint64_t seed, unsigned threads, OutputSink& sink,
                std::ostream& err) {
  const SedSetup s = read_sed_setup(c, seed, /*with_stride=*/true);
  const std::size_t bins = get_count(c, "output.bins", 10);
  const bool write_traj = c.get_bool("output.trajectories");
  const std::size_t traj_stride = get_count(c, "output.trajectory_stride", 1);
  const double segment = c.get_double("output.envelope_segment");
  for (const auto& w : s.warnings) err << "warning: " << w << '\n';

  const FieldSpec* field = s.field ? &*s.field : nullptr;
  const auto trajs = with_physical_keys(
      [&] { return run_ensemble(s.params, field, nullptr, s.ensemble, threads); });

  const TimeWindow window{s.ensemble.t_transient, s.ensemble.t_transient + s.ensemble.t_measure};
  HistogramOptions hopts;
  hopts.bins = bins;
  const auto px = position_distribution(trajs, window, hopts);
  const auto pp = momentum_distribution(trajs, window, hopts);
  const auto energies = member_mean_energy(trajs, window);
  const auto squares = member_mean_square_position(trajs, window);
  const MeanEstimate e_est = mean_with_error(energies);
  const MeanEstimate x2_est = mean_with_error(squares);

  json summary;
  summary["sigma_x"] = px.sigma;
  summary["sigma_p"] = pp.sigma;
  summary["uncertainty_product"] = uncertainty_product(px, pp);
  summary["mean_energy"] = mean_energy(trajs, window);
  summary["mean_energy_stderr"] = e_est.stderr_mean;
  summary["mean_square_x"] = x2_est.mean;
  summary["mean_square_x_stderr"] = x2_est.stderr_mean;
  summary["n_samples"] = px.n_samples;
  summary["window"] = {window.begin, window.end};

  const auto xs = collect_positions(trajs, window);
  if (s.field) {
    const double sx = std::sqrt(s.hbar / (2.0 * s.params.mass * s.params.omega0));
    const double sp = std::sqrt(s.hbar * s.params.mass * s.params.omega0 / 2.0);
    const auto ps = collect_momenta(trajs, window);
    summary["coherence_time"] = coherence_time(*s.field);
    summary["ks_gaussian_x"] = opt(ks_or_null(xs, gaussian_cdf(0.0, sx)));
    summary["ks_gaussian_p"] = opt(ks_or_null(ps, gaussian_cdf(0.0, sp)));
  } else {
    const double amplitude = std::hypot(s.ensemble.x0, s.ensemble.v0 / s.params.omega0);
    summary["ks_arcsine"] = amplitude > 0.0 ? opt(ks_or_null(xs, arcsine_cdf(amplitude))) : json(nullptr);
  }
  if (segment > 0.0) {
    const auto env = envelope_normalized_distribution(trajs, window, segment);
    const auto b = bimodality(env.histogram);
    summary["envelope_segment"] = segment;
    summary["envelope_central_density"] = b.central_density;
    summary["envelope_turning_density"] = b.turning_density;
    summary["envelope_bimodal"] = b.bimodal;
    sink.table("envelope_histogram", [&](std::ostream& o) { write_csv(o, env.histogram); });
  }

  json seeds = json::array();
  for (std::size_t i = 0; i < s.ensemble.n_members; ++i) seeds.push_back(member_seed(seed, i));
  summary["seeds"] = seeds;
  summary["warnings"] = s.warnings;

  sink.table("position_histogram", [&](std::ostream& o) { write_csv(o, px.histogram); });
  sink.table("momentum_histogram", [&](std::ostream& o) { write_csv(o, pp.histogram); });
  if (write_traj) {
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      sink.table("trajectory_" + std::to_string(i),
                 [&](std::ostream& o) { write_csv(o, trajs[i], traj_stride); });
    }
  }
  sink.finish(json{{"summary", summary}, {"provenance", provenance("sed-run", c, seed)}});
  return kExitOk;
}

int cmd_sed_spectrum(const RunConfig& c, std::uint64_t seed, unsigned threads, OutputSink& sink,
                     std::ostream& err) {
  const SedSetup s = read_sed_setup(c, seed, /*with_stride=*/false);
  PulseSpec pulse;
  pulse.enabled = true;
  pulse.amplitude = c.get_double("pulse.amplitude");
  pulse.sigma_t = c.get_double("pulse.sigma_t");
  with_section("pulse", [&] { pulse.validate(); });
  const double lo = c.get_double("grid.omega_min");
  const double hi = c.get_double("grid.omega_max");
  const std::size_t points = get_count(c, "grid.points", 1);
  if (points > 1 && !(hi > lo)) throw ConfigError("grid.omega_max", "must exceed grid.omega_min");
  const auto grid = linspace(lo, hi, points);
  SpectrumOptions sopts;
  sopts.threads = threads;
  const double base = c.get_double("spectrum.baseline_measure");
  if (base < 0.0) throw ConfigError("spectrum.baseline_measure", "must be >= 0 (0 = same as t_measure)");
  if (base > 0.0) sopts.baseline_measure = base;
  for (const auto& w : s.warnings) err << "warning: " << w << '\n';

  const FieldSpec* field = s.field ? &*s.field : nullptr;
  const auto spec = with_physical_keys([&] {
    try {
      return excitation_spectrum(s.params, field, pulse, grid, s.ensemble, sopts);
    } catch (const ParameterError& e) {
      if (e.key() == "grid") throw ConfigError("grid.points", e.message());
      throw;
    }
  });
  for (const auto& w : spec.warnings) err << "warning: " << w << '\n';

  double max_dev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sigma = std::hypot(spec.stderr_energy[i], spec.baseline_stderr);
    const double dev = std::abs(spec.mean_energy[i] - spec.baseline);
    max_dev = std::max(max_dev, sigma > 0.0 ? dev / sigma : (dev > 0.0 ? INFINITY : 0.0));
  }

  json summary;
  summary["baseline"] = spec.baseline;
  summary["baseline_stderr"] = spec.baseline_stderr;
  summary["stderr"] = spec.stderr_energy;
  summary["argmax_omega_p"] = spec.omega_p[spec.argmax()];
  summary["max_deviation_from_baseline_sigma"] =
      std::isfinite(max_dev) ? json(max_dev) : json("inf");
  summary["pulse_center"] = spec.pulse_center;
  summary["window"] = {spec.window.begin, spec.window.end};
  summary["baseline_window"] = {spec.baseline_window.begin, spec.baseline_window.end};
  json seeds = json::array();
  for (std::size_t i = 0; i < s.ensemble.n_members; ++i) seeds.push_back(member_seed(seed, i));
  summary["seeds"] = seeds;
  std::vector<std::string> warnings = s.warnings;
  warnings.insert(warnings.end(), spec.warnings.begin(), spec.warnings.end());
  summary["warnings"] = warnings;

  sink.table("spectrum", [&](std::ostream& o) { write_csv(o, spec); });
  sink.finish(json{{"summary", summary}, {"provenance", provenance("sed-spectrum", c, seed)}});
  return kExitOk;
}

int cmd_whichpath(const RunConfig& c, std::uint64_t seed, OutputSink& sink) {
  WhichPathModel model;
  model.a = c.get_double("whichpath.a");
  model.k0 = c.get_double("whichpath.k0");
  with_section("whichpath", [&] { model.validate(); });
  const auto xi = linspace(c.get_double("whichpath.xi_min"), c.get_double("whichpath.xi_max"),
                           get_count(c, "whichpath.xi_points", 1));
  const auto kappa = linspace(c.get_double("whichpath.kappa_min"), c.get_double("whichpath.kappa_max"),
                              get_count(c, "whichpath.kappa_points", 1));

  json summary;
  summary["a"] = model.a;
  summary["k0"] = model.k0;
  summary["contrast"] = fringe_contrast(model);
  if (model.a > 0.0) {
    double max_diff = 0.0;
    for (double x : xi) max_diff = std::max(max_diff, std::abs(fringe_pattern(model, x) - fringe_quadrature(model, x)));
    summary["max_abs_closed_minus_quadrature"] = max_diff;
    const double reach = model.k0 + 10.0 / model.a;
    const auto norm = integrate_adaptive([&](double k) { return slit_momentum_density(model, k); },
                                         -reach, reach, 1e-10);
    summary["momentum_density_integral"] = norm.value;
  } else {
    summary["max_abs_closed_minus_quadrature"] = nullptr;
    summary["momentum_density_integral"] = nullptr;
  }
  json pa = json::array();
  for (double k : kappa) pa.push_back(slit_probabilities(model, k).p_a);
  summary["p_a"] = pa;

  sink.table("fringe", [&](std::ostream& o) { write_fringe_csv(o, model, xi); });
  if (model.a > 0.0) {
    sink.table("momentum", [&](std::ostream& o) { write_momentum_csv(o, model, kappa); });
  } else {
    sink.table("momentum", [&](std::ostream& o) {
      o << "kappa,p_a,p_b\n";
      for (double k : kappa) {
        const auto p = slit_probabilities(model, k);
        o << format_double(k) << ',' << format_double(p.p_a) << ',' << format_double(p.p_b) << '\n';
      }
    });
  }
  sink.finish(json{{"summary", summary}, {"provenance", provenance("whichpath", c, seed)}});
  return kExitOk;
}

SlitGeometry read_geometry(const RunConfig& c) {
  SlitGeometry g;
  const std::string kind = c.get_string("walker.kind");
  if (kind == "single") {
    g.kind = SlitKind::single;
  } else if (kind == "double") {
    g.kind = SlitKind::double_slit;
  } else {
    throw ConfigError("walker.kind", "expected 'single' or 'double'");
  }
  g.centers = c.get_double_list("walker.centers");
  g.width = c.get_double("walker.width");
  g.barrier_x = c.get_double("walker.barrier_x");
  g.barrier_y = c.get_double("walker.barrier_y");
  g.axis_angle = c.get_double("walker.axis_angle");
  g.faraday_wavelength = c.get_double("walker.faraday_wavelength");
  const double r = c.get_double("walker.eval_radius");
  if (r < 0.0) throw ConfigError("walker.eval_radius", "must be >= 0 (0 = two slit widths)");
  if (r > 0.0) g.eval_radius = r;
  g.bath.drive_hz = c.get_double("bath.drive_hz");
  g.bath.viscosity_cst = c.get_double("bath.viscosity_cst");
  g.bath.depth_mm = c.get_double("bath.depth_mm");
  with_section("walker", [&] { g.validate(); });
  return g;
}

int cmd_walker(const RunConfig& c, std::uint64_t seed, OutputSink& sink) {
  const SlitGeometry geom = read_geometry(c);
  const std::string input = c.get_string("walker.input");
  std::vector<WalkerTrajectory> trajs;
  if (!input.empty()) {
    trajs = load_trajectories(input);
  } else {
    const std::string law_name = c.get_string("synth.law");
    const auto law = with_section("synth", [&] {
      if (law_name == "delta") return AngularLaw::delta(c.get_double("synth.delta_angle"));
      if (law_name == "uniform") return AngularLaw::uniform(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
      if (law_name == "lobed") return lobed_single_slit_law(geom);
      throw ConfigError("synth.law", "expected 'delta', 'uniform' or 'lobed'");
    });
    const auto n = get_count(c, "synth.n", 1);
    const double noise = c.get_double("synth.noise");
    trajs = with_section("synth", [&] { return synthesize_walkers(geom, law, n, noise, seed); });
  }

  const double max_div = c.get_double("analysis.max_divergence");
  const std::size_t bins = get_count(c, "analysis.bins", 1);
  const bool symmetrize = c.get_bool("analysis.symmetrize");
  std::vector<double> angles;
  std::size_t rejected = 0;
  for (const auto& tr : trajs) {
    if (max_div > 0.0) {
      const auto heading = initial_heading(tr, geom);
      if (!heading || std::abs(*heading) > max_div) {
        ++rejected;
        continue;
      }
    }
    if (const auto a = exit_angle(tr, geom)) angles.push_back(*a);
  }
  if (angles.empty()) throw NumericError("no trajectory crossed the reading circle");

  const auto raw = angular_histogram(angles, bins, false, geom.radius());
  // mass as a count ratio so a single-bin law reads exactly 1
  const std::size_t center_bin = bins / 2;
  const double lo = raw.histogram.edges[center_bin];
  const double hi = raw.histogram.edges[center_bin + 1];
  const auto in_center = std::count_if(angles.begin(), angles.end(),
                                       [&](double a) { return a >= lo && a < hi; });

  json summary;
  summary["predicted_peak_angle"] = predicted_peak_angle(geom);
  summary["n_trajectories"] = trajs.size();
  summary["n_rejected_divergence"] = rejected;
  summary["n_exits"] = angles.size();
  summary["eval_radius"] = geom.radius();
  summary["central_bin_mass"] = bins % 2 == 1 ? json(static_cast<double>(in_center) / static_cast<double>(angles.size())) : json(nullptr);
  json g;
  g["kind"] = geom.kind == SlitKind::single ? "single" : "double";
  g["centers"] = geom.centers;
  g["width"] = geom.width;
  g["barrier"] = {geom.barrier_x, geom.barrier_y};
  g["axis_angle"] = geom.axis_angle;
  g["faraday_wavelength"] = geom.faraday_wavelength;
  g["bath"] = {{"drive_hz", geom.bath.drive_hz},
               {"viscosity_cst", geom.bath.viscosity_cst},
               {"depth_mm", geom.bath.depth_mm}};
  summary["geometry"] = g;

  sink.table("angular_raw", [&](std::ostream& o) { write_csv(o, raw); });
  if (symmetrize) {
    const auto sym = angular_histogram(angles, bins, true, geom.radius());
    bool even = true;
    for (std::size_t i = 0; i < bins; ++i) {
      even = even && sym.histogram.densities[i] == sym.histogram.densities[bins - 1 - i];
    }
    summary["symmetrized_even"] = even;
    sink.table("angular_symmetrized", [&](std::ostream& o) { write_csv(o, sym); });
  }
  if (c.get_bool("analysis.fit")) {
    double amplitude = c.get_double("analysis.fit_amplitude");
    if (amplitude <= 0.0) {
      amplitude = *std::max_element(raw.histogram.densities.begin(), raw.histogram.densities.end());
    }
    const auto theta = linspace(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi, 361);
    const auto fit = single_slit_fit(theta, geom, amplitude);
    summary["fit_amplitude"] = amplitude;
    sink.table("fit", [&](std::ostream& o) { write_fit_csv(o, theta, fit); });
  }
  sink.finish(json{{"summary", summary}, {"provenance", provenance("walker", c, seed)}});
  return kExitOk;
}

}  // namespace

RunConfig make_config(const std::string& subcommand) {
  RunConfig c;
  c.declare("seed", "1");
  if (subcommand == "sed-run") {
    declare_oscillator(c);
    declare_ensemble(c, /*with_stride=*/true, "8", "20000", "0.1");
    c.declare("output.bins", "101");
    c.declare("output.trajectories", "false");
    c.declare("output.trajectory_stride", "1");
    c.declare("output.envelope_segment", "0");
  } else if (subcommand == "sed-spectrum") {
    declare_oscillator(c);
    declare_ensemble(c, /*with_stride=*/false, "8", "200", "0.05");
    c.declare("pulse.amplitude", "0.05");
    c.declare("pulse.sigma_t", "20");
    c.declare("grid.omega_min", "0.5");
    c.declare("grid.omega_max", "3.5");
    c.declare("grid.points", "31");
    c.declare("spectrum.baseline_measure", "0");
  } else if (subcommand == "whichpath") {
    c.declare("whichpath.a", "1");
    c.declare("whichpath.k0", "1");
    c.declare("whichpath.xi_min", "-10");
    c.declare("whichpath.xi_max", "10");
    c.declare("whichpath.xi_points", "201");
    c.declare("whichpath.kappa_min", "-3");
    c.declare("whichpath.kappa_max", "3");
    c.declare("whichpath.kappa_points", "121");
  } else if (subcommand == "walker") {
    c.declare("walker.input", "");
    c.declare("walker.kind", "single");
    c.declare("walker.centers", "0");
    c.declare("walker.width", "14.25");
    c.declare("walker.barrier_x", "0");
    c.declare("walker.barrier_y", "0");
    c.declare("walker.axis_angle", "0");
    c.declare("walker.faraday_wavelength", "4.75");
    c.declare("walker.eval_radius", "0");
    c.declare("bath.drive_hz", "50");
    c.declare("bath.viscosity_cst", "20");
    c.declare("bath.depth_mm", "4");
    c.declare("synth.law", "lobed");
    c.declare("synth.n", "2000");
    c.declare("synth.noise", "0");
    c.declare("synth.delta_angle", "0");
    c.declare("analysis.bins", "61");
    c.declare("analysis.symmetrize", "true");
    c.declare("analysis.fit", "true");
    c.declare("analysis.fit_amplitude", "0");
    c.declare("analysis.max_divergence", "0");
  } else {
    throw ConfigError("", "unknown subcommand '" + subcommand + "'");
  }
  return c;
}

int run_command(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  try {
    RunConfig c = make_config(options.subcommand);
    if (options.config_path) c.load_file(*options.config_path);
    for (const auto& o : options.overrides) c.set_assignment(o);
    if (options.seed) c.set("seed", std::to_string(*options.seed));
    if (options.format != "csv" && options.format != "json") {
      throw ConfigError("format", "expected 'csv' or 'json'");
    }
    const std::uint64_t seed = c.get_uint("seed");
    const unsigned threads = std::max(1u, options.threads);

    OutputSink sink(options.out_dir, options.format);
    int code = kExitOk;
    if (options.subcommand == "sed-run") {
      code = cmd_sed_run(c, seed, threads, sink, err);
    } else if (options.subcommand == "sed-spectrum") {
      code = cmd_sed_spectrum(c, seed, threads, sink, err);
    } else if (options.subcommand == "whichpath") {
      code = cmd_whichpath(c, seed, sink);
    } else {
      code = cmd_walker(c, seed, sink);
    }
    out << "wrote " << (fs::path(options.out_dir) / "summary.json").string() << '\n';
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"sedlab: zero-point-field oscillator, which-path and walker analyses"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions options;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config_path, "Key-value config file with [section] headers");
    sub->add_option("--seed", seed, "Global seed (overrides config)");
    sub->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", options.threads, "Worker cap; outputs do not depend on it")
        ->capture_default_str();
    sub->add_option("--format", options.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--set,-D", options.overrides, "Override a config key: section.key=value");
  };
  for (const char* name : {"sed-run", "sed-spectrum", "whichpath", "walker"}) {
    add_common(app.add_subcommand(name));
  }
  app.get_subcommand("sed-run")->description("Ensemble run: distributions, uncertainty product, energy");
  app.get_subcommand("sed-spectrum")->description("Pulse-carrier sweep of the post-pulse mean energy");
  app.get_subcommand("whichpath")->description("Fringe pattern, contrast and which-slit probabilities");
  app.get_subcommand("walker")->description("Walker exit-angle distributions at two slit widths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (auto* sub : app.get_subcommands()) {
    options.subcommand = sub->get_name();
    if (sub->count("--seed") > 0) options.seed = seed;
  }
  return run_command(options, std::cout, std::cerr);
}

}  // namespace sedlab::cli
