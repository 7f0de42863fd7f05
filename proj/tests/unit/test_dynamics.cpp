#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sedlab/dynamics.hpp"
#include "sedlab/errors.hpp"
#include "sedlab/vacuum_field.hpp"

using namespace sedlab;

namespace {

OscillatorParams free_params() {
  OscillatorParams p;
  p.gamma_rad = 0.0;
  return p;
}

double max_cos_error(double dt, double t_end) {
  IntegrationOptions o;
  o.dt = dt;
  const auto tr = integrate_trajectory(free_params(), nullptr, nullptr, {1.0, 0.0}, {0.0, t_end}, o);
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    worst = std::max(worst, std::abs(tr.samples[k].x - std::cos(tr.time_at(k))));
  }
  return worst;
}

}  // namespace

TEST(Pulse, Envelope) {
  PulseSpec p;
  EXPECT_EQ(pulse_field_at(p, 3.0), 0.0);
  p.enabled = true;
  p.amplitude = 1.0;
  p.t_center = 50.0;
  p.sigma_t = 4.0;
  p.omega_p = 2.0;
  EXPECT_DOUBLE_EQ(pulse_field_at(p, 50.0), 1.0);
  EXPECT_LE(std::abs(pulse_field_at(p, 70.0)), std::exp(-12.5) * (1 + 1e-12));
  EXPECT_LE(std::abs(pulse_field_at(p, 30.0)), 3.8e-6);
}

TEST(Pulse, Validation) {
  PulseSpec p;
  p.enabled = true;
  p.sigma_t = 0.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p.sigma_t = 1.0;
  p.amplitude = -1.0;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(Integrator, FreeOscillatorHundredPeriods) {
  EXPECT_LE(max_cos_error(0.005, 200.0 * std::numbers::pi), 1e-6);
}

TEST(Integrator, FourthOrderConvergence) {
  const double coarse = max_cos_error(0.1, 20.0 * std::numbers::pi);
  const double fine = max_cos_error(0.05, 20.0 * std::numbers::pi);
  EXPECT_GE(coarse / fine, 12.0);
}

TEST(Integrator, EnergyDrift) {
  OscillatorIntegrator it(free_params(), nullptr, std::nullopt, {1.0, 0.0}, 0.0, 0.005);
  const double e0 = it.energy();
  for (int k = 0; k < 100000; ++k) it.step();
  EXPECT_LT(std::abs(it.energy() - e0) / e0, 1e-6);
}

TEST(Integrator, DampedOracle) {
  OscillatorParams p;
  IntegrationOptions o;
  o.dt = 0.005;
  const auto tr = integrate_trajectory(p, nullptr, nullptr, {1.0, 0.0}, {0.0, 100.0}, o);
  // exp(-g t/2) (cos wd t + g/(2 wd) sin wd t) at t = 100, g = 1e-3
  EXPECT_NEAR(tr.samples.back().x, 0.820016223578721149623, 1e-9);
}

TEST(Integrator, DampedLogPeakSlope) {
  OscillatorParams p;
  IntegrationOptions o;
  o.dt = 0.05;
  const auto tr = integrate_trajectory(p, nullptr, nullptr, {1.0, 0.0}, {0.0, 4000.0}, o);
  std::vector<double> ts, ls;
  for (std::size_t k = 1; k + 1 < tr.samples.size(); ++k) {
    const double x = tr.samples[k].x;
    if (x > tr.samples[k - 1].x && x >= tr.samples[k + 1].x) {
      ts.push_back(tr.time_at(k));
      ls.push_back(std::log(x));
    }
  }
  ASSERT_GT(ts.size(), 100u);
  double mt = 0, ml = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= static_cast<double>(ts.size());
  ml /= static_cast<double>(ts.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxy += (ts[i] - mt) * (ls[i] - ml);
    sxx += (ts[i] - mt) * (ts[i] - mt);
  }
  EXPECT_NEAR(sxy / sxx, -0.5e-3, 0.01 * 0.5e-3);
}

TEST(Integrator, ResonantPulseEnergy) {
  PulseSpec pulse{0.05, 1.0, 200.0, 20.0, true};
  IntegrationOptions o;
  o.dt = 0.01;
  const auto tr = integrate_trajectory(free_params(), nullptr, &pulse, {0.0, 0.0}, {0.0, 400.0}, o);
  const auto& s = tr.samples.back();
  // (1/2) [E0 sqrt(pi/2) sigma (e^{-(w0-wp)^2 s^2/2} + e^{-(w0+wp)^2 s^2/2})]^2
  EXPECT_NEAR(0.5 * (s.v * s.v + s.x * s.x), std::numbers::pi / 4.0, 1e-8);

  pulse.omega_p = 0.9;
  const auto off = integrate_trajectory(free_params(), nullptr, &pulse, {0.0, 0.0}, {0.0, 400.0}, o);
  const auto& q = off.samples.back();
  EXPECT_NEAR(0.5 * (q.v * q.v + q.x * q.x), 0.0143850691446627063, 1e-9);
}

TEST(Integrator, StepLimit) {
  FieldSpec f;
  const auto t = synthesize_modes(f);
  OscillatorParams p = OscillatorParams::from(f);
  EXPECT_NEAR(max_stable_step(p, &t, nullptr), 2.0 * std::numbers::pi / (20.0 * 1.025), 1e-15);
  PulseSpec pulse{0.1, 3.5, 10.0, 1.0, true};
  EXPECT_NEAR(max_stable_step(p, &t, &pulse), 2.0 * std::numbers::pi / 70.0, 1e-15);
  IntegrationOptions o;
  o.dt = 0.1;
  EXPECT_NO_THROW(integrate_trajectory(p, &t, nullptr, {0, 0}, {0.0, 1.0}, o));
  EXPECT_THROW(integrate_trajectory(p, &t, &pulse, {0, 0}, {0.0, 1.0}, o), ParameterError);
}

TEST(Integrator, BadSpanAndState) {
  IntegrationOptions o;
  EXPECT_THROW(integrate_trajectory(free_params(), nullptr, nullptr, {0, 0}, {1.0, 1.0}, o), ParameterError);
  EXPECT_THROW(integrate_trajectory(free_params(), nullptr, nullptr,
                                    {std::numeric_limits<double>::quiet_NaN(), 0}, {0.0, 1.0}, o),
               ParameterError);
}

TEST(Integrator, DivergenceReportsStep) {
  PulseSpec pulse{1e308, 1.0, 0.0, 1.0, true};
  IntegrationOptions o;
  o.dt = 0.1;
  try {
    integrate_trajectory(free_params(), nullptr, &pulse, {1e308, 1e308}, {0.0, 10.0}, o);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_LE(e.step(), 100u);
  }
}

TEST(Trajectory, SampleCountAndStride) {
  IntegrationOptions o;
  o.dt = 0.1;
  o.stride = 4;
  o.record_from = 2.0;
  const auto tr = integrate_trajectory(free_params(), nullptr, nullptr, {1, 0}, {0.0, 10.0}, o);
  EXPECT_DOUBLE_EQ(tr.t0, 2.0);
  EXPECT_NEAR(tr.dt, 0.4, 1e-15);
  EXPECT_EQ(tr.samples.size(), 1u + static_cast<std::size_t>(std::floor((10.0 - 2.0) / 0.4 + 1e-9)));
  EXPECT_NEAR(tr.samples[0].x, std::cos(2.0), 1e-5);

  std::ostringstream out;
  write_csv(out, tr, 5);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,v");
}

TEST(Integrator, CopyForks) {
  FieldSpec f;
  const auto t = synthesize_modes(f);
  OscillatorIntegrator a(OscillatorParams::from(f), &t, std::nullopt, {0.1, 0.0}, 0.0, 0.1);
  for (int k = 0; k < 777; ++k) a.step();
  OscillatorIntegrator b = a;
  for (int k = 0; k < 500; ++k) {
    a.step();
    b.step();
  }
  EXPECT_EQ(a.state().x, b.state().x);
  EXPECT_EQ(a.state().v, b.state().v);
}

TEST(Integrator, LinearResponse) {
  FieldSpec f;
  f.seed = 12;
  auto t = synthesize_modes(f);
  auto t2 = t;
  for (auto& a : t2.amplitudes) a *= 2.0;
  const auto p = OscillatorParams::from(f);
  IntegrationOptions o;
  o.dt = 0.1;
  const auto a = integrate_trajectory(p, &t, nullptr, {0, 0}, {0.0, 5000.0}, o);
  const auto b = integrate_trajectory(p, &t2, nullptr, {0, 0}, {0.0, 5000.0}, o);
  double ra = 0, rb = 0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    ra += a.samples[k].x * a.samples[k].x;
    rb += b.samples[k].x * b.samples[k].x;
  }
  EXPECT_NEAR(std::sqrt(rb / ra), 2.0, 1e-10);
}

// Larger Gamma so the relaxation and averaging fit a unit-test budget.
TEST(Integrator, VacuumVarianceOracle) {
  double acc = 0.0;
  const int members = 8;
  for (int m = 0; m < members; ++m) {
    FieldSpec f;
    f.gamma_rad = 0.01;
    f.bandwidth = 50.0 * f.linewidth();
    f.seed = 100 + m;
    const auto t = synthesize_modes(f);
    IntegrationOptions o;
    o.dt = 0.1;
    o.stride = 5;
    o.record_from = 1000.0;
    const auto tr = integrate_trajectory(OscillatorParams::from(f), &t, nullptr, {0, 0},
                                         {0.0, 101000.0}, o);
    double s = 0.0;
    for (const auto& q : tr.samples) s += q.x * q.x;
    acc += s / static_cast<double>(tr.samples.size());
  }
  EXPECT_NEAR(acc / members, 0.5, 0.025);
}
