#include "kernelkit/moments.hpp"

#include <cmath>

#include "kernelkit/errors.hpp"
#include "kernelkit/special.hpp"

namespace kk {

ExponentialMoments::ExponentialMoments(WeightedMeasure measure)
    : measure_(std::move(measure)) {
  AdmissibilityReport rep = admissible(measure_, MeasureRole::Bernstein);
  if (!rep.admissible)
    throw NonIntegrable("moments require a Bernstein-admissible measure: " +
                        rep.diagnostic);
}

double ExponentialMoments::moment(int n, double mu) const {
  if (n < 1) throw DomainError("moment order must be >= 1");
  switch (measure_.family) {
    case MeasureFamily::PowerLaw: {
      // int u^{n+p} e^{-mu u} du = Gamma(n+1+p) mu^{-(n+1+p)}
      double a = n + 1.0 + measure_.exponent;
      if (!(mu > 0.0))
        throw NonIntegrable("moment has a divergent tail at mu=0");
      return measure_.normalization * measure_.coeff *
             special::gamma(a) * std::pow(mu, -a);
    }
    case MeasureFamily::ExpOverU:
      // int u^{n-1} e^{-(1+mu)u} du = (n-1)! / (1+mu)^n
      return measure_.normalization * special::gamma((double)n) *
             std::pow(1.0 + mu, -(double)n);
    default:
      return special::generalized_gamma(n + 1.0, mu, measure_);
  }
}

double ExponentialMoments::moment_ratio(int n, double mu) const {
  switch (measure_.family) {
    case MeasureFamily::PowerLaw:
      return (n + 1.0 + measure_.exponent) / mu;
    case MeasureFamily::ExpOverU:
      return (double)n / (1.0 + mu);
    default:
      return moment(n + 1, mu) / moment(n, mu);
  }
}

double ExponentialMoments::limit_ratio(double k, double mu) const {
  switch (measure_.family) {
    case MeasureFamily::PowerLaw:
      return std::abs(k) / mu;
    case MeasureFamily::ExpOverU:
      return std::abs(k) / (1.0 + mu);
    default: {
      // moment_ratio(n)/(n+1) approaches a limit; probe at a large order.
      double mr = moment_ratio(64, mu);
      return std::abs(k) * mr / 65.0;
    }
  }
}

double ExponentialMoments::diagonal_theta() const {
  if (measure_.family == MeasureFamily::PowerLaw)
    return -1.0 - measure_.exponent;  // terms ~ n^{p} = n^{-1-theta}
  if (measure_.decay == TailDecay::Power &&
      measure_.family == MeasureFamily::Custom)
    return -1.0 - measure_.tail_exponent;
  return 1.0;  // exponentially decaying measures never hit the slow path
}

}  // namespace kk
