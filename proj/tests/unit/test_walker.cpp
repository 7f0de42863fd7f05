#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sedlab/errors.hpp"
#include "sedlab/random.hpp"
#include "sedlab/statistics.hpp"
#include "sedlab/walker.hpp"

using namespace sedlab;

namespace {

WalkerTrajectory straight(double y_cross, double angle, double r = 40.0) {
  WalkerTrajectory t;
  t.id = 1;
  t.samples.push_back({0.0, -30.0, y_cross});
  t.samples.push_back({1.0, 0.0, y_cross});
  t.samples.push_back({2.0, r * std::cos(angle), y_cross + r * std::sin(angle)});
  return t;
}

WalkerTrajectory refined(const WalkerTrajectory& t, int factor) {
  WalkerTrajectory out;
  out.id = t.id;
  for (std::size_t k = 0; k + 1 < t.samples.size(); ++k) {
    const auto& a = t.samples[k];
    const auto& b = t.samples[k + 1];
    for (int j = 0; j < factor; ++j) {
      const double s = static_cast<double>(j) / factor;
      out.samples.push_back({a.t + s * (b.t - a.t), a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
    }
  }
  out.samples.push_back(t.samples.back());
  return out;
}

}  // namespace

TEST(Geometry, Defaults) {
  SlitGeometry g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_DOUBLE_EQ(g.radius(), 2.0 * g.width);
  EXPECT_DOUBLE_EQ(predicted_peak_angle(g), 4.75 / 14.25);
  g.width = 0.0;
  EXPECT_THROW(g.validate(), ParameterError);
  SlitGeometry d;
  d.kind = SlitKind::double_slit;
  EXPECT_THROW(d.validate(), ParameterError);
  d.centers = {-20.0, 20.0};
  EXPECT_NO_THROW(d.validate());
}

TEST(Exit, StraightLineAngle) {
  SlitGeometry g;
  for (double a : {-1.2, -0.3, 0.0, 0.25, 1.4}) {
    const auto e = find_exit(straight(0.0, a), g);
    ASSERT_TRUE(e.has_value());
    EXPECT_NEAR(e->angle, a, 1e-12);
    EXPECT_NEAR(std::hypot(e->point.x, e->point.y), g.radius(), 1e-12);
  }
}

TEST(Exit, OffCenterCrossing) {
  SlitGeometry g;
  // crossing 5 mm off center, exit point read on the circle around the center
  const auto t = straight(5.0, 0.0);
  const auto e = find_exit(t, g);
  ASSERT_TRUE(e.has_value());
  EXPECT_NEAR(e->angle, std::asin(5.0 / g.radius()), 1e-12);
}

TEST(Exit, NeverLeaves) {
  SlitGeometry g;
  WalkerTrajectory t;
  t.samples = {{0, -30, 0}, {1, 0, 0}, {2, 10, 0}};
  EXPECT_FALSE(find_exit(t, g).has_value());
}

TEST(Exit, ResamplingInvariance) {
  SlitGeometry g;
  const auto t = straight(-3.0, 0.4);
  const double base = *exit_angle(t, g);
  for (int f : {2, 7, 50}) EXPECT_NEAR(*exit_angle(refined(t, f), g), base, 1e-12);
}

TEST(Exit, RotationEquivariance) {
  SlitGeometry g;
  g.barrier_x = 3.0;
  g.barrier_y = -2.0;
  const auto t = straight(-2.0 + 4.0, 0.7);
  auto shifted = t;
  for (auto& s : shifted.samples) s.x += 3.0;
  const auto e0 = find_exit(shifted, g);
  ASSERT_TRUE(e0.has_value());
  for (double phi : {0.3, 1.9, -2.5}) {
    const auto e = find_exit(rotated(shifted, phi), rotated(g, phi));
    ASSERT_TRUE(e.has_value());
    EXPECT_NEAR(e->angle, e0->angle, 1e-12);
    EXPECT_NEAR(std::remainder(e->bearing - e0->bearing - phi, 2.0 * std::numbers::pi), 0.0, 1e-12);
  }
}

TEST(Exit, DoubleSlitAssignment) {
  SlitGeometry g;
  g.kind = SlitKind::double_slit;
  g.centers = {-20.0, 20.0};
  const auto e = find_exit(straight(18.0, 0.2), g);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->slit, 1u);
  const auto f = find_exit(straight(-21.0, -0.2), g);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->slit, 0u);
}

TEST(Angular, SymmetrizedIsExactlyEven) {
  std::vector<double> angles;
  for (int i = 0; i < 999; ++i) angles.push_back(0.9 * std::sin(0.37 * i) + 0.2);
  for (std::size_t bins : {10u, 61u}) {
    const auto d = angular_histogram(angles, bins, true);
    EXPECT_TRUE(d.symmetrized);
    for (std::size_t i = 0; i < bins; ++i) {
      ASSERT_EQ(d.histogram.densities[i], d.histogram.densities[bins - 1 - i]);
    }
    EXPECT_NEAR(d.histogram.integral(), 1.0, 1e-12);
  }
  const auto raw = angular_histogram(angles, 61, false);
  EXPECT_NEAR(raw.histogram.integral(), 1.0, 1e-12);
}

TEST(Fit, ShapeAndZeros) {
  SlitGeometry g;
  std::vector<double> theta{0.0, std::asin(4.75 / 14.25), -std::asin(4.75 / 14.25)};
  const auto v = single_slit_fit(theta, g, 2.5);
  EXPECT_DOUBLE_EQ(v[0], 2.5);
  EXPECT_NEAR(v[1], 0.0, 1e-15);
  EXPECT_NEAR(v[2], 0.0, 1e-15);
}

TEST(Law, LobedPeaks) {
  SlitGeometry g;
  const auto law = lobed_single_slit_law(g);
  const double peak = std::asin(4.75 / 14.25);
  // density via finite differences of the CDF
  auto dens = [&](double x) { return (law.cdf(x + 1e-3) - law.cdf(x - 1e-3)) / 2e-3; };
  EXPECT_GT(dens(peak), dens(0.0));
  EXPECT_GT(dens(peak), dens(peak + 0.15));
  EXPECT_NEAR(dens(peak), dens(-peak), 1e-6);
  EXPECT_NEAR(law.cdf(0.0), 0.5, 1e-9);
}

TEST(Law, SamplesFollowCdf) {
  const auto law = AngularLaw::uniform(-0.5, 1.0);
  Rng r(4);
  std::vector<double> s(50000);
  for (auto& v : s) v = law.sample(r);
  EXPECT_LE(ks_distance(s, uniform_cdf(-0.5, 1.0)), ks_critical_95(5e4));
  EXPECT_THROW(AngularLaw::delta(2.0), ParameterError);
}

TEST(Synthesis, RoundTripDelta) {
  SlitGeometry g;
  g.axis_angle = 0.4;
  const auto walkers = synthesize_walkers(g, AngularLaw::delta(0.3), 200, 0.0, 5);
  ASSERT_EQ(walkers.size(), 200u);
  EXPECT_EQ(walkers.front().id, 1);
  for (const auto& w : walkers) {
    const auto a = exit_angle(w, g);
    ASSERT_TRUE(a.has_value());
    EXPECT_NEAR(*a, 0.3, 1e-12);
    const auto h = initial_heading(w, g);
    ASSERT_TRUE(h.has_value());
    EXPECT_NEAR(*h, 0.0, 1e-12);
  }
}

TEST(Synthesis, NoiseIsSeeded) {
  SlitGeometry g;
  const auto a = synthesize_walkers(g, AngularLaw::uniform(-1, 1), 10, 0.2, 9);
  const auto b = synthesize_walkers(g, AngularLaw::uniform(-1, 1), 10, 0.2, 9);
  EXPECT_EQ(a[3].samples[5].x, b[3].samples[5].x);
  EXPECT_THROW(synthesize_walkers(g, AngularLaw::uniform(-1, 1), 10, -1.0, 9), ParameterError);
}

TEST(Loader, RoundTripThroughCsv) {
  SlitGeometry g;
  const auto walkers = synthesize_walkers(g, lobed_single_slit_law(g), 20, 0.0, 3);
  std::ostringstream out;
  write_csv(out, walkers);
  std::istringstream in(out.str());
  const auto back = read_trajectories(in);
  ASSERT_EQ(back.size(), walkers.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].id, walkers[i].id);
    EXPECT_EQ(back[i].samples.size(), walkers[i].samples.size());
    EXPECT_EQ(*exit_angle(back[i], g), *exit_angle(walkers[i], g));
  }
}

TEST(Loader, ColumnOrderAndSorting) {
  std::istringstream in("y,extra,t,id,x\n0,a,1,2,0\n0,b,0,2,-1\n1,c,0,1,0\n2,d,1,1,0\n");
  const auto t = read_trajectories(in);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].id, 1);
  EXPECT_EQ(t[1].id, 2);
  EXPECT_EQ(t[1].samples[0].x, -1.0);
}

TEST(Loader, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_trajectories(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  {
    std::istringstream in("id,t,x\n1,0,0\n");
    try {
      read_trajectories(in);
      FAIL();
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("missing column 'y'"), std::string::npos);
    }
  }
  EXPECT_EQ(line_of("id,t,x,y\n1,0,0,0\n1,1,abc,0\n"), 3u);
  EXPECT_EQ(line_of("id,t,x,y\n1,0,0,0\n1,0,1,0\n"), 3u);
  EXPECT_EQ(line_of("id,t,x,y\n1,0,0,0\n1,1,1\n"), 3u);
  EXPECT_EQ(line_of("id,t,x,y\n1,0,0,0\n"), 2u);
  EXPECT_THROW(load_trajectories("/nonexistent/walkers.csv"), ParseError);
}

TEST(Angular, SingleAngleUnitCentralMass) {
  std::vector<double> one{0.0};
  const auto d = angular_histogram(one, 61, false);
  EXPECT_NEAR(d.histogram.densities[30] * d.histogram.width(30), 1.0, 1e-12);
}

TEST(Angular, UniformBinDeviation) {
  Rng r(12);
  const std::size_t n = 100000, bins = 61;
  std::vector<double> a(n);
  for (auto& v : a) v = r.uniform(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  const auto d = angular_histogram(a, bins, false);
  const double expected = static_cast<double>(n) / bins;
  double worst = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double count = d.histogram.densities[i] * d.histogram.width(i) * static_cast<double>(n);
    worst = std::max(worst, std::abs(count - expected) / expected);
  }
  EXPECT_LE(worst, 5.0 / std::sqrt(expected));
}

TEST(Geometry, PeakAngleScaling) {
  SlitGeometry g;
  g.faraday_wavelength = g.width;
  EXPECT_DOUBLE_EQ(predicted_peak_angle(g), 1.0);
  SlitGeometry a, b;
  b.width = 2.0 * a.width;
  EXPECT_DOUBLE_EQ(predicted_peak_angle(b), 0.5 * predicted_peak_angle(a));
}

TEST(Fit, Symmetric) {
  SlitGeometry g;
  std::vector<double> t{0.1, 0.5, 1.2}, m{-0.1, -0.5, -1.2};
  EXPECT_EQ(single_slit_fit(t, g, 1.0), single_slit_fit(m, g, 1.0));
}

TEST(Synthesis, LobedPeakWithinOneBin) {
  SlitGeometry g;
  const auto walkers = synthesize_walkers(g, lobed_single_slit_law(g), 100000, 0.0, 21);
  std::vector<double> angles;
  for (const auto& w : walkers) angles.push_back(*exit_angle(w, g));
  const auto d = angular_histogram(angles, 61, true);
  std::size_t best = 31;
  for (std::size_t i = 31; i < 61; ++i) {
    if (d.histogram.densities[i] > d.histogram.densities[best]) best = i;
  }
  EXPECT_LE(std::abs(d.histogram.center(best) - predicted_peak_angle(g)), d.histogram.width(best));
}

TEST(Loader, TwoRowsAndShuffled) {
  std::istringstream two("id,t,x,y\n4,0,1,2\n4,1,3,4\n");
  const auto t = read_trajectories(two);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].samples.size(), 2u);

  std::istringstream sorted("id,t,x,y\n1,0,0,0\n1,1,1,0\n2,0,5,5\n2,2,6,6\n");
  std::istringstream shuffled("id,t,x,y\n2,2,6,6\n1,1,1,0\n2,0,5,5\n1,0,0,0\n");
  const auto a = read_trajectories(sorted);
  const auto b = read_trajectories(shuffled);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    for (std::size_t k = 0; k < a[i].samples.size(); ++k) {
      EXPECT_EQ(a[i].samples[k].t, b[i].samples[k].t);
      EXPECT_EQ(a[i].samples[k].x, b[i].samples[k].x);
    }
  }
}
