#pragma once

#include "kernelkit/measures.hpp"

namespace kk::special {

// Euler Gamma on (0, inf), Lanczos approximation (g=7, 9 coefficients).
// Relative error <= 1e-12 on (0, 50].
double gamma(double x);

// Generalized Gamma against a weighted measure:
//   Gamma(z, mu; dm) = int_0^inf u^{z-1} e^{-mu u} dm(u).
// Reduces to gamma(z) * mu^{-z} for the Lebesgue measure.
double generalized_gamma(double z, double mu, const WeightedMeasure& measure,
                         double tol = 1e-10);

// V_H = Gamma(2-2H) cos(H pi) / (pi (1-2H) H), evaluated in the equivalent
// form Gamma(2-2H) * sinc(pi(1/2-H)) / (2H) which is smooth through the
// removable singularity at H = 1/2 (value exactly 1).
double v_h(double hurst);

// phi(x) = int_0^inf (1 - e^{-ux}) dm(u) for a Bernstein-admissible measure.
struct BernsteinFunction {
  WeightedMeasure measure;

  explicit BernsteinFunction(WeightedMeasure m);
};

double bernstein_eval(const BernsteinFunction& phi, double x,
                      double tol = 1e-10);

}  // namespace kk::special
