#pragma once

#include <ostream>
#include <span>

namespace sedlab {

/// Recoiling-slit model: the slit position is Gaussian with width `a` and the
/// particle carries wavenumber `k0`.
struct WhichPathModel {
  double a = 0.0;
  double k0 = 1.0;

  void validate() const;
};

/// Detection-screen intensity 1 + exp(-a^2 k0^2) cos(2 k0 xi).
double fringe_pattern(const WhichPathModel& model, double xi);

/// Same intensity by direct integration over the unobserved slit position on
/// [-8a, 8a] to absolute tolerance 1e-8. Requires a > 0; throws NumericError
/// if the adaptive rule fails to converge.
double fringe_quadrature(const WhichPathModel& model, double xi);

/// Fringe visibility exp(-a^2 k0^2).
double fringe_contrast(const WhichPathModel& model);

struct SlitProbabilities {
  double p_a;
  double p_b;
};

/// Which-slit probabilities given slit recoil wavenumber kappa, in the
/// logistic form p_A = 1 / (1 + exp(4 a^2 kappa k0)).
SlitProbabilities slit_probabilities(const WhichPathModel& model, double kappa);

/// Slit momentum density D(kappa) = a/(2 sqrt(pi)) (e^{-a^2(kappa+k0)^2} + e^{-a^2(kappa-k0)^2}).
double slit_momentum_density(const WhichPathModel& model, double kappa);

struct SingleSlitResult {
  double theta;    ///< diffraction angle (h/p)/d
  double delta_p;  ///< transverse momentum spread theta * p = h/d
  double product;  ///< d * delta_p
};

SingleSlitResult single_slit_product(double slit_width, double momentum, double planck);

/// CSV columns xi,closed_form,quadrature (quadrature column omitted for a = 0).
void write_fringe_csv(std::ostream& out, const WhichPathModel& model, std::span<const double> xi);
/// CSV columns kappa,density,p_a,p_b (density requires a > 0).
void write_momentum_csv(std::ostream& out, const WhichPathModel& model,
                        std::span<const double> kappa);

}  // namespace sedlab
