#include "kernelkit/special.hpp"

#include <cmath>
#include <numbers>

#include "kernelkit/errors.hpp"

namespace kk::special {

namespace {

// Lanczos (g = 7, n = 9), coefficients due to Godfrey/Pugh. Fixed scheme,
// no table lookups at runtime.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be positive");
  // All in-scope arguments are < ~200; Gamma overflows past 171.6.
  if (x > 171.6) throw DomainError("gamma: argument too large for double");
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
  double t = x + kLanczosG - 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x - 0.5) *
         std::exp(-t) * a;
}

double generalized_gamma(double z, double mu, const WeightedMeasure& measure,
                         double tol) {
  if (!(mu >= 0.0)) throw DomainError("generalized_gamma: mu must be >= 0");
  // u^{z-1} e^{-mu u}: endpoint order z-1; tail is exponential for mu > 0,
  // algebraic u^{z-1} for mu = 0.
  IntegrandTraits traits;
  traits.zero_order = z - 1.0;
  traits.tail_order = z - 1.0;
  traits.decays_exponentially = mu > 0.0;
  auto f = [z, mu](double u) {
    return std::pow(u, z - 1.0) * std::exp(-mu * u);
  };
  QuadratureResult r = integrate(f, measure, tol, {}, traits);
  return r.value;
}

double v_h(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("v_h: H must lie in (0,1)");
  if (hurst == 0.5) return 1.0;  // removable singularity, exact limit
  double d = 0.5 - hurst;
  double x = std::numbers::pi * d;
  // cos(H pi) = sin(pi(1/2-H)); the quotient sin(x)/x fills the removable
  // singularity at H = 1/2 with the exact limit value 1.
  double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return gamma(2.0 - 2.0 * hurst) * sinc / (2.0 * hurst);
}

BernsteinFunction::BernsteinFunction(WeightedMeasure m) : measure(std::move(m)) {
  AdmissibilityReport rep = admissible(measure, MeasureRole::Bernstein);
  if (!rep.admissible)
    throw NonIntegrable("measure is not Bernstein-admissible: " +
                        rep.diagnostic);
}

double bernstein_eval(const BernsteinFunction& phi, double x, double tol) {
  if (!(x >= 0.0)) throw DomainError("bernstein_eval: x must be >= 0");
  if (x == 0.0) return 0.0;
  IntegrandTraits traits;
  traits.zero_order = 1.0;  // 1 - e^{-ux} ~ ux
  traits.tail_order = 0.0;
  auto f = [x](double u) { return -std::expm1(-u * x); };
  return integrate(f, phi.measure, tol, {}, traits).value;
}

}  // namespace kk::special
