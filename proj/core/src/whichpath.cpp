#include "sedlab/whichpath.hpp"

#include <cmath>
#include <numbers>

#include "sedlab/csv.hpp"
#include "sedlab/errors.hpp"
#include "sedlab/quadrature.hpp"

namespace sedlab {

void WhichPathModel::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError("a", "must be finite and >= 0");
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw ParameterError("k0", "must be finite and > 0");
}

double fringe_contrast(const WhichPathModel& model) {
  model.validate();
  const double ak = model.a * model.k0;
  return std::exp(-ak * ak);
}

double fringe_pattern(const WhichPathModel& model, double xi) {
  return 1.0 + fringe_contrast(model) * std::cos(2.0 * model.k0 * xi);
}

double fringe_quadrature(const WhichPathModel& model, double xi) {
  // k0 = 0 is allowed here: the integrand is then twice the normalized
  // Gaussian and the result is exactly 2 (up to quadrature error).
  if (!(model.a > 0.0) || !std::isfinite(model.a)) {
    throw ParameterError("a", "quadrature route needs a > 0");
  }
  if (!(model.k0 >= 0.0) || !std::isfinite(model.k0)) {
    throw ParameterError("k0", "must be finite and >= 0");
  }
  const double a = model.a;
  const double k0 = model.k0;
  const double norm = 1.0 / (a * std::sqrt(std::numbers::pi));
  auto integrand = [=](double z) {
    const double g = norm * std::exp(-(z * z) / (a * a));
    return g * (1.0 + std::cos(2.0 * k0 * (xi + z)));
  };
  const auto r = integrate_adaptive(integrand, -8.0 * a, 8.0 * a, 1e-8, 1u << 14);
  if (!r.converged) {
    throw NumericError("fringe quadrature did not converge (error estimate " +
                       format_double(r.error_estimate) + ")");
  }
  return r.value;
}

SlitProbabilities slit_probabilities(const WhichPathModel& model, double kappa) {
  model.validate();
  // p_A / p_B = exp(-4 a^2 kappa k0). Each probability is evaluated as its
  // own logistic so the smaller one keeps full relative precision.
  const double s = 4.0 * model.a * model.a * kappa * model.k0;
  const double p_a = 1.0 / (1.0 + std::exp(s));
  const double p_b = 1.0 / (1.0 + std::exp(-s));
  return {p_a, p_b};
}

double slit_momentum_density(const WhichPathModel& model, double kappa) {
  model.validate();
  if (!(model.a > 0.0)) throw ParameterError("a", "momentum density needs a > 0");
  const double a = model.a;
  const double plus = a * (kappa + model.k0);
  const double minus = a * (kappa - model.k0);
  return a / (2.0 * std::sqrt(std::numbers::pi)) * (std::exp(-plus * plus) + std::exp(-minus * minus));
}

SingleSlitResult single_slit_product(double slit_width, double momentum, double planck) {
  if (!(slit_width > 0.0)) throw ParameterError("d", "must be > 0");
  if (!(momentum > 0.0)) throw ParameterError("p", "must be > 0");
  if (!(planck > 0.0)) throw ParameterError("h", "must be > 0");
  SingleSlitResult r;
  r.theta = (planck / momentum) / slit_width;
  r.delta_p = planck / slit_width;
  r.product = slit_width * r.delta_p;
  return r;
}

void write_fringe_csv(std::ostream& out, const WhichPathModel& model, std::span<const double> xi) {
  CsvWriter csv(out);
  if (model.a > 0.0) {
    csv.header({"xi", "closed_form", "quadrature"});
    for (double x : xi) csv.row({x, fringe_pattern(model, x), fringe_quadrature(model, x)});
  } else {
    csv.header({"xi", "closed_form"});
    for (double x : xi) csv.row({x, fringe_pattern(model, x)});
  }
}

void write_momentum_csv(std::ostream& out, const WhichPathModel& model,
                        std::span<const double> kappa) {
  CsvWriter csv(out);
  csv.header({"kappa", "density", "p_a", "p_b"});
  for (double k : kappa) {
    const auto p = slit_probabilities(model, k);
    csv.row({k, slit_momentum_density(model, k), p.p_a, p.p_b});
  }
}

}  // namespace sedlab
