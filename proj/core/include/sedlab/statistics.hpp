#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace sedlab {

/// Normalized histogram: densities integrate to 1 over the in-range samples.
struct Histogram {
  std::vector<double> edges;      ///< bins + 1 ascending edges
  std::vector<double> densities;  ///< one per bin

  std::size_t bins() const noexcept { return densities.size(); }
  double width(std::size_t i) const noexcept { return edges[i + 1] - edges[i]; }
  double center(std::size_t i) const noexcept { return 0.5 * (edges[i] + edges[i + 1]); }
  double integral() const noexcept;
};

struct HistogramRange {
  double lo;
  double hi;
};

/// Uniform bins over `range`; samples outside are skipped and counted in
/// `outside`. Throws ParameterError if no sample falls inside.
Histogram make_histogram(std::span<const double> samples, std::size_t bins, HistogramRange range,
                         std::size_t* outside = nullptr);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  ///< population variance
  std::size_t count = 0;
};

/// Two-pass mean/variance in input order.
Moments moments(std::span<const double> samples) noexcept;

using Cdf = std::function<double(double)>;

/// Kolmogorov-Smirnov sup-distance between the empirical distribution of
/// `samples` and `reference`. The reference is evaluated on both sides of
/// every sample so step-function references are handled exactly.
/// Throws ParameterError for fewer than 100 samples.
double ks_distance(std::span<const double> samples, const Cdf& reference);

/// Two-sided 95% KS critical value 1.36 / sqrt(n).
double ks_critical_95(double n_effective) noexcept;

Cdf gaussian_cdf(double mean, double sigma);
/// Arcsine law of A cos(phase) with uniform phase: 1/2 + asin(x/A)/pi.
Cdf arcsine_cdf(double amplitude);
Cdf uniform_cdf(double lo, double hi);

/// CSV with columns bin_left,bin_right,density (column names overridable).
void write_csv(std::ostream& out, const Histogram& hist, const char* left = "bin_left",
               const char* right = "bin_right");

}  // namespace sedlab
