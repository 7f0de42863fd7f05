#include "sedlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sedlab/csv.hpp"
#include "sedlab/errors.hpp"

namespace sedlab {

double Histogram::integral() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < bins(); ++i) s += densities[i] * width(i);
  return s;
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins, HistogramRange range,
                         std::size_t* outside) {
  if (bins < 1) throw ParameterError("bins", "must be >= 1");
  if (!(range.hi > range.lo)) throw ParameterError("range", "hi must exceed lo");

  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (range.hi - range.lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = range.lo + static_cast<double>(i) * width;
  h.edges.back() = range.hi;

  std::vector<double> counts(bins, 0.0);
  std::size_t inside = 0;
  for (double s : samples) {
    if (!(s >= range.lo && s <= range.hi)) continue;
    auto idx = static_cast<std::size_t>((s - range.lo) / width);
    if (idx >= bins) idx = bins - 1;
    counts[idx] += 1.0;
    ++inside;
  }
  if (outside != nullptr) *outside = samples.size() - inside;
  if (inside == 0) throw ParameterError("samples", "no sample falls inside the histogram range");

  h.densities.resize(bins);
  const double total = static_cast<double>(inside);
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = counts[i] / (total * width);
  return h;
}

Moments moments(std::span<const double> samples) noexcept {
  Moments m;
  m.count = samples.size();
  if (samples.empty()) return m;
  double s = 0.0;
  for (double x : samples) s += x;
  m.mean = s / static_cast<double>(samples.size());
  double q = 0.0;
  for (double x : samples) q += (x - m.mean) * (x - m.mean);
  m.variance = q / static_cast<double>(samples.size());
  return m;
}

double ks_distance(std::span<const double> samples, const Cdf& reference) {
  if (samples.size() < 100) {
    throw ParameterError("samples", "KS distance needs at least 100 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Group ties: the empirical CDF jumps from i/n to j/n at sorted[i].
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double x = sorted[i];
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    const double f_at = reference(x);
    const double f_left = reference(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(above - f_at), std::abs(f_left - below)});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_critical_95(double n_effective) noexcept { return 1.36 / std::sqrt(n_effective); }

Cdf gaussian_cdf(double mean, double sigma) {
  return [mean, sigma](double x) {
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::numbers::sqrt2));
  };
}

Cdf arcsine_cdf(double amplitude) {
  const double a = std::abs(amplitude);
  return [a](double x) {
    if (x <= -a) return 0.0;
    if (x >= a) return 1.0;
    return 0.5 + std::asin(x / a) / std::numbers::pi;
  };
}

Cdf uniform_cdf(double lo, double hi) {
  return [lo, hi](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return (x - lo) / (hi - lo);
  };
}

void write_csv(std::ostream& out, const Histogram& hist, const char* left, const char* right) {
  CsvWriter csv(out);
  csv.header({left, right, "density"});
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    csv.row({hist.edges[i], hist.edges[i + 1], hist.densities[i]});
  }
}

}  // namespace sedlab
