#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sedlab/quadrature.hpp"

using namespace sedlab;

TEST(Quadrature, Polynomial) {
  const auto r = integrate_adaptive([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.0, 1e-13);
}

TEST(Quadrature, Gaussian) {
  const auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Quadrature, Oscillatory) {
  const auto r = integrate_adaptive([](double x) { return std::cos(40 * x); }, 0.0, 1.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::sin(40.0) / 40.0, 1e-12);
}

TEST(Quadrature, ReportsNonConvergence) {
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x)); }, -1.0, 1.0,
                                    1e-14, 8);
  EXPECT_FALSE(r.converged);
}
