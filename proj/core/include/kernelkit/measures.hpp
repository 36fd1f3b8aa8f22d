#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kernelkit/errors.hpp"
#include "kernelkit/quadrature.hpp"

namespace kk {

enum class MeasureFamily { PowerLaw, ExpOverU, Custom };

// Declared behavior of the density as u -> infinity. Admissibility and tail
// handling work off the declaration, never off probing.
enum class TailDecay { Power, Exponential, Unknown };

// A measure dm(u) = w(u) du on (0, infinity). Measures on the full line are
// assumed even and stored folded onto the half line; integrals of full-line
// objects carry an explicit factor 2 at the call site.
struct WeightedMeasure {
  MeasureFamily family = MeasureFamily::PowerLaw;
  double coeff = 1.0;     // c in w(u) = c * u^p  (PowerLaw)
  double exponent = 0.0;  // p in w(u) = c * u^p  (PowerLaw)
  std::function<double(double)> density;  // Custom only
  double sing0 = 0.0;          // w(u) ~ u^sing0 as u -> 0+
  TailDecay decay = TailDecay::Power;
  double tail_exponent = 0.0;  // w(u) ~ u^tail_exponent as u -> inf (Power)
  double normalization = 1.0;  // positive multiplier

  double weight(double u) const;

  static WeightedMeasure power_law(double c, double p);
  static WeightedMeasure exp_over_u();
  static WeightedMeasure custom(std::function<double(double)> density,
                                double sing0, TailDecay decay,
                                double tail_exponent = 0.0);
  static WeightedMeasure lebesgue() { return power_law(1.0, 0.0); }
  // dm(u) = (1/pi) u^{1-2H} du: spectral measure of fBm with Hurst H.
  static WeightedMeasure fbm_spectral(double hurst);
  // dm(u) = (2H/Gamma(1-2H)) u^{-1-2H} du: Bernstein measure of |t|^{2H},
  // valid for H in (0,1/2).
  static WeightedMeasure fbm_bernstein(double hurst);

  // Spot checks: nonnegativity on a log-spaced probe grid and agreement of
  // the declared sing0 with the numerical slope of log w on [1e-8, 1e-4].
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int panels = 0;
  bool converged = true;
};

// Known analytic behavior of the integrand, used to sharpen divergence
// checks and endpoint substitutions. Defaults describe a bounded integrand.
struct IntegrandTraits {
  double zero_order = 0.0;  // f(u) ~ u^zero_order as u -> 0+
  double tail_order = 0.0;  // f(u) ~ u^tail_order as u -> inf
  bool decays_exponentially = false;
};

// Integral of integrand(u) * w(u) du over (0, infinity) with relative error
// target tol. Splits (0,1] and [1,inf); the endpoint singularity declared by
// the measure is removed by a power substitution; when oscillation_scale T is
// given, panel widths on [1,inf) never exceed pi/T and the tail is summed
// over full periods with exponent-aware extrapolation.
QuadratureResult integrate(const quad::Integrand& integrand,
                           const WeightedMeasure& measure, double tol,
                           std::optional<double> oscillation_scale = {},
                           const IntegrandTraits& traits = {});

enum class MeasureRole { SpectralKrein, Bernstein };

struct AdmissibilityReport {
  bool admissible = false;
  std::string diagnostic;
};

// Checks the integrability conditions of the role: the tail condition
// (SpectralKrein: int_1^inf dm/(u^2+1) < inf; Bernstein: int_1^inf dm < inf)
// and the u->0 endpoint condition implied by the kernel integrands.
AdmissibilityReport admissible(const WeightedMeasure& measure,
                               MeasureRole role);

}  // namespace kk
