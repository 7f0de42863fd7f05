#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sedlab/errors.hpp"
#include "sedlab/quadrature.hpp"
#include "sedlab/random.hpp"
#include "sedlab/whichpath.hpp"

using namespace sedlab;

TEST(WhichPath, Validation) {
  EXPECT_THROW((WhichPathModel{-1.0, 1.0}).validate(), ParameterError);
  EXPECT_THROW((WhichPathModel{1.0, 0.0}).validate(), ParameterError);
  EXPECT_NO_THROW((WhichPathModel{0.0, 1.0}).validate());
}

TEST(WhichPath, ContrastValues) {
  EXPECT_DOUBLE_EQ(fringe_contrast({0.0, 3.0}), 1.0);
  EXPECT_NEAR(fringe_contrast({1.0, 1.0}), 0.36787944117144233, 1e-16);
  EXPECT_LE(fringe_contrast({10.0, 1.0}), 1e-40);
}

TEST(WhichPath, ClosedFormMatchesIndependentIntegral) {
  // direct integral over the Gaussian slit position at high precision
  EXPECT_NEAR(fringe_pattern({0.7, 1.3}, 0.4), 1.2211567808361554919, 1e-15);
  EXPECT_NEAR(fringe_quadrature({0.7, 1.3}, 0.4), 1.2211567808361554919, 1e-8);
}

TEST(WhichPath, QuadratureZeroWavenumber) {
  WhichPathModel m{1.0, 1.0};
  m.k0 = 0.0;
  EXPECT_NEAR(fringe_quadrature(m, 0.3), 2.0, 1e-8);
}

TEST(WhichPath, PatternRange) {
  WhichPathModel m{0.3, 2.0};
  for (double xi = -10.0; xi <= 10.0; xi += 0.01) {
    const double f = fringe_pattern(m, xi);
    ASSERT_GE(f, 1.0 - fringe_contrast(m) - 1e-15);
    ASSERT_LE(f, 1.0 + fringe_contrast(m) + 1e-15);
  }
}

TEST(WhichPath, Probabilities) {
  Rng r(2);
  for (int i = 0; i < 10000; ++i) {
    WhichPathModel m{r.uniform(0.0, 5.0), r.uniform(0.01, 5.0)};
    const auto p = slit_probabilities(m, r.uniform(-10.0, 10.0));
    ASSERT_NEAR(p.p_a + p.p_b, 1.0, 1e-12);
    ASSERT_GE(p.p_a, 0.0);
    ASSERT_GE(p.p_b, 0.0);
  }
  EXPECT_EQ(slit_probabilities({2.0, 3.0}, 0.0).p_a, 0.5);
  EXPECT_NEAR(slit_probabilities({0.5, 2.0}, 0.3).p_a, 0.354343693774204547, 1e-15);
  EXPECT_LE(slit_probabilities({10.0, 1.0}, 1.0).p_a, 1e-43);
  EXPECT_GE(slit_probabilities({10.0, 1.0}, 1.0).p_b, 1.0 - 1e-15);
}

TEST(WhichPath, ProbabilitiesFromDensityRatio) {
  const WhichPathModel m{0.8, 1.1};
  for (double k = -3.0; k <= 3.0; k += 0.25) {
    const double ea = std::exp(-std::pow(m.a * (k + m.k0), 2));
    const double eb = std::exp(-std::pow(m.a * (k - m.k0), 2));
    EXPECT_NEAR(slit_probabilities(m, k).p_a, ea / (ea + eb), 1e-14);
  }
}

TEST(WhichPath, MomentumDensity) {
  EXPECT_NEAR(slit_momentum_density({1.0, 1.0}, 0.5), 0.24942821703976854, 1e-16);
  EXPECT_THROW(slit_momentum_density({0.0, 1.0}, 0.5), ParameterError);
  for (double a : {0.1, 0.3, 1.0, 4.0}) {
    const WhichPathModel m{a, 2.0};
    const double reach = m.k0 + 12.0 / a;
    const auto r = integrate_adaptive([&](double k) { return slit_momentum_density(m, k); }, -reach,
                                      reach, 1e-12);
    EXPECT_NEAR(r.value, 1.0, 1e-6);
  }
}

TEST(WhichPath, SingleSlit) {
  const auto r = single_slit_product(2e-6, 3e-24, 6.62607015e-34);
  EXPECT_NEAR(r.product, 6.62607015e-34, 6.62607015e-34 * 1e-15);
  EXPECT_NEAR(r.theta, 6.62607015e-34 / 3e-24 / 2e-6, 1e-20);
  EXPECT_THROW(single_slit_product(0.0, 1.0, 1.0), ParameterError);
}

TEST(WhichPath, CsvColumns) {
  std::ostringstream out;
  std::vector<double> xi{0.0, 1.0};
  write_fringe_csv(out, {1.0, 1.0}, xi);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "xi,closed_form,quadrature");
  std::ostringstream m;
  write_momentum_csv(m, {1.0, 1.0}, xi);
  EXPECT_EQ(m.str().substr(0, m.str().find('\n')), "kappa,density,p_a,p_b");
}
