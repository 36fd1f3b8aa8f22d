#include "kernelkit/transforms.hpp"

#include <cmath>

#include "kernelkit/errors.hpp"
#include "kernelkit/special.hpp"

namespace kk::transforms {

TransformContext::TransformContext(GeneratorFunction r_,
                                   WeightedMeasure phi_measure_, double t0_)
    : r(std::move(r_)), phi_measure(std::move(phi_measure_)), t0(t0_) {
  if (t0 == 0.0) throw DomainError("transform anchor t0 must be nonzero");
  AdmissibilityReport rep = admissible(phi_measure, MeasureRole::Bernstein);
  if (!rep.admissible)
    throw NonIntegrable("phi measure is not Bernstein-admissible: " +
                        rep.diagnostic);
  r.validate();
}

namespace {

// sum_{n>=1} M(n, mu)/n! x^n via the moment-ratio recurrence.
SeriesResult moment_power_series(const ExponentialMoments& moments, double mu,
                                 double x, const TruncationPolicy& policy) {
  if (policy.n_max < 2)
    throw DomainError("truncation policy needs n_max >= 2");
  SeriesResult res;
  if (x == 0.0) return res;
  double q = moments.limit_ratio(x, mu);
  if (q >= 1.0 - 1e-12)
    throw Divergent("transform series ratio reaches 1 at mu=" +
                    std::to_string(mu));
  quad::KahanSum acc;
  double term = x * moments.moment(1, mu);
  int n = 1;
  double tail;
  while (true) {
    acc.add(term);
    ++res.n_terms;
    tail = std::abs(term) * q / (1.0 - q);
    if (tail <= policy.rel_tol * std::max(1.0, std::abs(acc.value()))) {
      res.converged = true;
      break;
    }
    if (res.n_terms >= policy.n_max) {
      res.converged = false;
      break;
    }
    term *= x * moments.moment_ratio(n, mu) / (n + 1.0);
    ++n;
  }
  res.value = acc.value();
  res.tail_estimate = tail;
  return res;
}

}  // namespace

std::map<double, PsiPointResult> psi_apply(
    const TransformContext& ctx, const std::map<double, double>& f_values,
    const TruncationPolicy& policy) {
  ExponentialMoments moments(ctx.phi_measure);
  const double r0 = ctx.r(ctx.t0);
  std::map<double, PsiPointResult> out;
  for (const auto& [t, ft] : f_values) {
    double mu = ctx.r(t) + r0;
    PsiPointResult point;
    try {
      point.series = moment_power_series(moments, mu, ft, policy);
    } catch (const Divergent&) {
      point.divergent = true;
      point.series.converged = false;
      point.series.tail_estimate =
          std::numeric_limits<double>::infinity();
    }
    out.emplace(t, std::move(point));
  }
  return out;
}

SeriesResult psi_bound(const TransformContext& ctx, double norm_f,
                       const TruncationPolicy& policy) {
  if (!(norm_f >= 0.0)) throw DomainError("psi_bound: norm must be >= 0");
  ExponentialMoments moments(ctx.phi_measure);
  return moment_power_series(moments, 2.0 * ctx.r(ctx.t0), norm_f * norm_f,
                             policy);
}

FbmBoundConstant fbm_bound_constant(double hurst, double t0,
                                    const TruncationPolicy& policy) {
  if (!(hurst > 0.0 && hurst < 0.5))
    throw DomainError("fbm_bound_constant: H must lie in (0,1/2)");
  if (!(t0 > 0.5))
    throw DomainError("fbm_bound_constant: the series requires t0 > 1/2");

  const double h2 = 2.0 * hurst;
  const double m = 2.0 * t0;
  FbmBoundConstant out;

  // T_n = Gamma(n-2H) / (2^n n! (2 t0)^{n-2H}), from n = 2; ratio
  // (n-2H)/(2(n+1)(2 t0)) -> 1/(4 t0) < 1/2.
  quad::KahanSum acc;
  double term =
      special::gamma(2.0 - h2) / (4.0 * 2.0 * std::pow(m, 2.0 - h2));
  const double q = 1.0 / (2.0 * m);
  int n = 2;
  double tail;
  SeriesResult& series = out.series;
  while (true) {
    acc.add(term);
    ++series.n_terms;
    tail = std::abs(term) * q / (1.0 - q);
    if (tail <= policy.rel_tol * std::max(1.0, std::abs(acc.value()))) {
      series.converged = true;
      break;
    }
    if (series.n_terms >= policy.n_max) {
      series.converged = false;
      break;
    }
    term *= (n - h2) / (2.0 * (n + 1.0) * m);
    ++n;
  }
  series.value = acc.value();
  series.tail_estimate = tail;

  double beta = h2 / special::gamma(1.0 - h2);
  out.prefactor = beta * beta;
  out.prefactored_value = out.prefactor * series.value;
  return out;
}

}  // namespace kk::transforms
