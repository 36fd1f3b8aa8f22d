#pragma once

#include "kernelkit/measures.hpp"

namespace kk {

// Evaluates the exponential-moment family of a Bernstein measure,
//   M(n, mu) = int_0^inf u^n e^{-mu u} dm(u),  n = 1, 2, ...
// which is Gamma(n+1, mu) in the generalized-Gamma notation. These are the
// coefficients of every Bernstein-type series decomposition (the expansion
// of e^{uK}-1 pairs K^n/n! with the n-th moment); closed forms are used for
// the PowerLaw and ExpOverU families, quadrature otherwise.
class ExponentialMoments {
public:
  explicit ExponentialMoments(WeightedMeasure measure);

  double moment(int n, double mu) const;
  // M(n+1, mu) / M(n, mu); multiplies into term-ratio recurrences so that
  // Gamma(n + const) and n! never appear as standalone huge values.
  double moment_ratio(int n, double mu) const;
  // Limit of the series term ratio |T_{n+1}/T_n| for terms K^n/n! M(n,mu).
  double limit_ratio(double k, double mu) const;
  // Tail exponent theta when the limit ratio degenerates to 1 (terms then
  // decay like n^{-1-theta}).
  double diagonal_theta() const;

  const WeightedMeasure& measure() const { return measure_; }

private:
  WeightedMeasure measure_;
};

}  // namespace kk
