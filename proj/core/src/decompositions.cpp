#include "kernelkit/decompositions.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "kernelkit/errors.hpp"
#include "kernelkit/special.hpp"

namespace kk {

namespace {

struct SeriesDef {
  double first_term = 0.0;
  int start = 1;
  std::function<double(int)> ratio;  // T_{n+1}/T_n
  double limit_ratio = 0.0;          // lim |T_{n+1}/T_n|
  double theta = 1.0;                // tail exponent when the limit is 1
};

// Sums T_start + T_{start+1} + ... with the multiplicative recurrence.
// Tail bounds: |T_N| q/(1-q) for limit ratio q < 1 (|ratio_n| increases to
// q, so this majorizes the remainder); integral comparison T_N N/theta when
// the ratio degenerates to 1 (terms then decay like n^{-1-theta}).
SeriesResult sum_series(const SeriesDef& def, const TruncationPolicy& policy) {
  if (policy.n_max < 2)
    throw DomainError("truncation policy needs n_max >= 2");
  SeriesResult res;
  if (def.first_term == 0.0) return res;
  if (def.limit_ratio > 1.0 + 1e-12)
    throw Divergent("series term ratio exceeds 1");
  const double q = std::min(def.limit_ratio, 1.0);
  const bool slow = q >= 1.0 - 1e-14;

  std::vector<double> partials;
  partials.reserve(std::min(policy.n_max, 4096));
  quad::KahanSum acc;
  double term = def.first_term;
  int n = def.start;
  double tail = std::numeric_limits<double>::infinity();
  while (true) {
    acc.add(term);
    partials.push_back(acc.value());
    ++res.n_terms;
    tail = slow ? std::abs(term) * n / std::max(def.theta, 1e-6)
                : std::abs(term) * q / (1.0 - q);
    if (tail <= policy.rel_tol * std::max(1.0, std::abs(acc.value()))) {
      res.converged = true;
      break;
    }
    if (res.n_terms >= policy.n_max) {
      res.converged = false;
      break;
    }
    term *= def.ratio(n);
    ++n;
  }
  res.value = acc.value();
  res.tail_estimate = tail;
  if (res.converged || policy.acceleration == TruncationPolicy::Acceleration::None)
    return res;

  // Budget exhausted: extrapolate the partial sums.
  const int last = (int)partials.size() - 1;
  bool eventually_positive = def.ratio(def.start + last + 4096) > 0.0;
  if (policy.acceleration == TruncationPolicy::Acceleration::Richardson &&
      slow && eventually_positive) {
    std::vector<double> ns, ss;
    for (double frac : {0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0}) {
      int idx = (int)std::llround(frac * last);
      if (!ns.empty() && def.start + idx <= ns.back()) continue;
      ns.push_back(def.start + idx);
      ss.push_back(partials[idx]);
    }
    double err = 0.0;
    double ext = quad::richardson_known_exponent(
        ns, ss, def.theta, std::min<int>(4, (int)ns.size() - 1), &err);
    if (std::isfinite(ext)) {
      res.value = ext;
      res.tail_estimate = err;
      res.converged =
          err <= policy.rel_tol * std::max(1.0, std::abs(ext)) * 10.0;
    }
  } else {
    std::vector<double> window(
        partials.end() - std::min<size_t>(partials.size(), 40),
        partials.end());
    double err = 0.0;
    double ext = quad::shanks(window, &err);
    if (std::isfinite(ext)) {
      res.value = ext;
      res.tail_estimate = err;
      res.converged = err <= policy.rel_tol * std::max(1.0, std::abs(ext));
    }
  }
  return res;
}

SeriesResult zero_result() { return SeriesResult{}; }

// Decompositions with an integral part split the tolerance budget between
// the quadrature and the series so the combined tail estimate still meets
// the requested tolerance.
TruncationPolicy half_budget(const TruncationPolicy& policy) {
  TruncationPolicy p = policy;
  p.rel_tol = 0.5 * policy.rel_tol;
  return p;
}

}  // namespace

QuadratureResult spectral_kernel(const WeightedMeasure& measure, double t,
                                 double s, double tol) {
  AdmissibilityReport rep = admissible(measure, MeasureRole::SpectralKrein);
  if (!rep.admissible)
    throw NonIntegrable("measure is not spectral-admissible: " +
                        rep.diagnostic);

  // K_r(t,s) = r(t) + r(s) - r(t-s) with r(tau) = 2 * int_0^inf
  // (1-cos(tau u))/u^2 dm(u); the factor 2 folds the even full-line measure.
  auto piece = [&](double tau) -> QuadratureResult {
    tau = std::abs(tau);
    if (tau == 0.0) return QuadratureResult{};
    auto f = [tau](double u) {
      double c = std::sin(0.5 * tau * u) / u;
      return 2.0 * c * c;  // (1-cos(tau u))/u^2 without cancellation
    };
    IntegrandTraits traits;
    traits.zero_order = 0.0;
    traits.tail_order = -2.0;
    return integrate(f, measure, tol / 6.0, tau, traits);
  };

  QuadratureResult rt = piece(t);
  QuadratureResult rs = piece(s);
  QuadratureResult rts = piece(t - s);

  QuadratureResult res;
  res.value = 2.0 * (rt.value + rs.value - rts.value);
  res.abs_error_estimate =
      2.0 * (rt.abs_error_estimate + rs.abs_error_estimate +
             rts.abs_error_estimate);
  res.panels = rt.panels + rs.panels + rts.panels;
  res.converged = rt.converged && rs.converged && rts.converged;
  return res;
}

SeriesResult fbm_decomposition_a(double hurst, double t, double s,
                                 const TruncationPolicy& policy) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("fbm_decomposition_a: H must lie in (0,1)");
  if (t == 0.0 || s == 0.0) return zero_result();

  const double h = hurst;
  const double t2 = t * t, s2 = s * s, sum2 = t2 + s2;

  IntegrandTraits traits;
  traits.zero_order = 4.0;
  traits.tail_order = 0.0;
  WeightedMeasure m = WeightedMeasure::power_law(1.0, -1.0 - 2.0 * h);
  QuadratureResult integral = integrate(
      [t2, s2](double u) {
        double u2 = u * u;
        return std::expm1(-u2 * t2) * std::expm1(-u2 * s2);
      },
      m, 0.25 * policy.rel_tol, {}, traits);

  SeriesDef def;
  def.first_term = special::gamma(1.0 - h) * (t * s) / std::pow(sum2, 1.0 - h);
  def.start = 1;
  def.ratio = [h, t, s, sum2](int n) {
    return 2.0 * (n - h) / (n + 1.0) * (t * s) / sum2;
  };
  def.limit_ratio = std::abs(2.0 * t * s / sum2);
  def.theta = h;
  SeriesResult series = sum_series(def, half_budget(policy));

  series.integral_part = integral.value;
  series.value += integral.value;
  series.tail_estimate += integral.abs_error_estimate;
  series.converged = series.converged && integral.converged;
  return series;
}

SeriesResult fbm_decomposition_b(double hurst, double t, double s,
                                 const TruncationPolicy& policy) {
  if (!(hurst > 0.0 && hurst < 0.5))
    throw DomainError("fbm_decomposition_b: H must lie in (0,1/2) strictly");
  if (t == 0.0 || s == 0.0) return zero_result();

  const double h2 = 2.0 * hurst;
  const double at = std::abs(t), as = std::abs(s);
  const double mu = at + as;
  const double k11 = mu - std::abs(t - s);
  const double beta = h2 / special::gamma(1.0 - h2);

  IntegrandTraits traits;
  traits.zero_order = 2.0;
  traits.tail_order = 0.0;
  WeightedMeasure m = WeightedMeasure::power_law(1.0, -1.0 - h2);
  QuadratureResult integral = integrate(
      [at, as](double u) {
        return std::expm1(-u * at) * std::expm1(-u * as);
      },
      m, 0.25 * policy.rel_tol, {}, traits);

  // n = 1 term of the series, kept separate: beta * K11 Gamma(1-2H) /
  // mu^{1-2H} = 2H K11 mu^{2H-1}.
  const double leading = h2 * k11 * std::pow(mu, h2 - 1.0);

  SeriesDef def;
  def.first_term =
      k11 * k11 * special::gamma(2.0 - h2) / (2.0 * std::pow(mu, 2.0 - h2));
  def.start = 2;
  def.ratio = [h2, k11, mu](int n) {
    return (k11 / mu) * (n - h2) / (n + 1.0);
  };
  def.limit_ratio = k11 / mu;
  def.theta = h2;
  SeriesResult series = sum_series(def, half_budget(policy));

  SeriesResult res;
  res.value = leading + beta * (integral.value + series.value);
  res.n_terms = series.n_terms + 1;
  res.integral_part = integral.value;
  res.tail_estimate =
      beta * series.tail_estimate + beta * integral.abs_error_estimate;
  res.converged = series.converged && integral.converged;
  return res;
}

SeriesResult bernstein_decomposition(const GeneratorFunction& r,
                                     const WeightedMeasure& phi_measure,
                                     double t, double s,
                                     const TruncationPolicy& policy) {
  ExponentialMoments moments(phi_measure);
  const double rt = r(t), rs = r(s), rts = r(t - s);
  const double k = rt + rs - rts;
  const double mu = rt + rs;
  if (k == 0.0) return zero_result();

  SeriesDef def;
  def.first_term = k * moments.moment(1, mu);
  def.start = 1;
  def.ratio = [&moments, k, mu](int n) {
    return k * moments.moment_ratio(n, mu) / (n + 1.0);
  };
  def.limit_ratio = moments.limit_ratio(k, mu);
  def.theta = moments.diagonal_theta();
  return sum_series(def, policy);
}

SeriesResult bifbm_decomposition(double hurst, double alpha, double t,
                                 double s, const TruncationPolicy& policy) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("bifbm_decomposition: H must lie in (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("bifbm_decomposition: alpha must lie in (0,1]");
  const double h2 = 2.0 * hurst;
  const double rt = std::pow(std::abs(t), h2), rs = std::pow(std::abs(s), h2);
  const double k = rt + rs - std::pow(std::abs(t - s), h2);
  const double mu = rt + rs;
  if (k == 0.0) return zero_result();

  // alpha = 1: 1/Gamma(1-alpha) vanishes (pole of Gamma at 0); the series
  // is exactly zero and the leading term reduces to K_r.
  const double leading = alpha * k * std::pow(mu, alpha - 1.0);
  SeriesResult res;
  if (alpha == 1.0) {
    res.value = leading;
    res.n_terms = 1;
    return res;
  }

  SeriesDef def;
  def.first_term =
      k * k * special::gamma(2.0 - alpha) / (2.0 * std::pow(mu, 2.0 - alpha));
  def.start = 2;
  def.ratio = [alpha, k, mu](int n) {
    return (k / mu) * (n - alpha) / (n + 1.0);
  };
  def.limit_ratio = k / mu;
  def.theta = alpha;
  SeriesResult series = sum_series(def, policy);

  const double pref = alpha / special::gamma(1.0 - alpha);
  res.value = leading + pref * series.value;
  res.n_terms = series.n_terms + 1;
  res.tail_estimate = pref * series.tail_estimate;
  res.converged = series.converged;
  return res;
}

SeriesResult krein_generator_decomposition(const WeightedMeasure& dm, double t,
                                           double s,
                                           const TruncationPolicy& policy) {
  ExponentialMoments moments(dm);
  const double at = std::abs(t), as = std::abs(s);
  if (at == 0.0 || as == 0.0) return zero_result();
  const double mu = at + as;
  const double k11 = mu - std::abs(t - s);

  IntegrandTraits traits;
  traits.zero_order = 2.0;
  traits.tail_order = 0.0;
  QuadratureResult integral = integrate(
      [at, as](double u) {
        return std::expm1(-u * at) * std::expm1(-u * as);
      },
      dm, 0.25 * policy.rel_tol, {}, traits);

  SeriesResult series;
  if (k11 != 0.0) {
    SeriesDef def;
    def.first_term = k11 * moments.moment(1, mu);
    def.start = 1;
    def.ratio = [&moments, k11, mu](int n) {
      return k11 * moments.moment_ratio(n, mu) / (n + 1.0);
    };
    def.limit_ratio = moments.limit_ratio(k11, mu);
    def.theta = moments.diagonal_theta();
    series = sum_series(def, half_budget(policy));
  }

  series.integral_part = integral.value;
  series.value += integral.value;
  series.tail_estimate += integral.abs_error_estimate;
  series.converged = series.converged && integral.converged;
  return series;
}

namespace {

struct RouteResult {
  double value = 0.0;
  bool converged = true;
};

}  // namespace

CrossValidationReport cross_validate(const KernelSpec& spec,
                                     DecompositionMethod method,
                                     std::span<const double> grid,
                                     const TruncationPolicy& policy) {
  if (grid.empty()) throw EmptyGrid("cross_validate: grid is empty");

  // Decomposition route (unscaled kernel) and closed-form reference.
  std::function<RouteResult(double, double)> route;
  std::function<double(double, double)> reference;
  const double scale = spec.scale;

  auto closed = [&spec](double t, double s) { return eval_closed(spec, t, s); };

  switch (method) {
    case DecompositionMethod::Spectral: {
      const Fbm* f = std::get_if<Fbm>(&spec.variant);
      if (!f) throw MethodMismatch("Spectral method requires an fbm spec");
      WeightedMeasure m = WeightedMeasure::fbm_spectral(f->hurst);
      double c = special::v_h(f->hurst);
      route = [m, scale, rel = policy.rel_tol](double t, double s) {
        QuadratureResult q = spectral_kernel(m, t, s, rel);
        return RouteResult{scale * q.value, q.converged};
      };
      reference = [closed, c](double t, double s) { return c * closed(t, s); };
      break;
    }
    case DecompositionMethod::SchoenbergA: {
      const Fbm* f = std::get_if<Fbm>(&spec.variant);
      if (!f) throw MethodMismatch("SchoenbergA method requires an fbm spec");
      double h = f->hurst;
      double pref = special::gamma(1.0 - h) / (2.0 * h);
      route = [h, scale, policy](double t, double s) {
        SeriesResult r = fbm_decomposition_a(h, t, s, policy);
        return RouteResult{scale * r.value, r.converged};
      };
      reference = [closed, pref](double t, double s) {
        return pref * closed(t, s);
      };
      break;
    }
    case DecompositionMethod::SchoenbergB: {
      const Fbm* f = std::get_if<Fbm>(&spec.variant);
      if (!f || f->hurst >= 0.5)
        throw MethodMismatch(
            "SchoenbergB method requires an fbm spec with H < 1/2");
      double h = f->hurst;
      route = [h, scale, policy](double t, double s) {
        SeriesResult r = fbm_decomposition_b(h, t, s, policy);
        return RouteResult{scale * r.value, r.converged};
      };
      reference = closed;
      break;
    }
    case DecompositionMethod::Bernstein: {
      if (const Krein* kr = std::get_if<Krein>(&spec.variant)) {
        if (!kr->r.representing_measure)
          throw MethodMismatch(
              "Bernstein method needs a generator with a representing "
              "measure");
        WeightedMeasure dm = *kr->r.representing_measure;
        route = [dm, scale, policy](double t, double s) {
          SeriesResult r = krein_generator_decomposition(dm, t, s, policy);
          return RouteResult{scale * r.value, r.converged};
        };
      } else if (std::holds_alternative<LogKernel>(spec.variant)) {
        WeightedMeasure dm = WeightedMeasure::exp_over_u();
        route = [dm, scale, policy](double t, double s) {
          SeriesResult r = krein_generator_decomposition(dm, t, s, policy);
          return RouteResult{scale * r.value, r.converged};
        };
      } else if (const BernsteinComposite* bc =
                     std::get_if<BernsteinComposite>(&spec.variant)) {
        GeneratorFunction r = bc->r;
        WeightedMeasure pm = bc->phi.measure;
        route = [r, pm, scale, policy](double t, double s) {
          SeriesResult sr = bernstein_decomposition(r, pm, t, s, policy);
          return RouteResult{scale * sr.value, sr.converged};
        };
      } else {
        throw MethodMismatch(
            "Bernstein method requires a krein, log, or bernstein_composite "
            "spec");
      }
      reference = closed;
      break;
    }
    case DecompositionMethod::BiFbmSeries: {
      const BiFbm* b = std::get_if<BiFbm>(&spec.variant);
      if (!b) throw MethodMismatch("BiFbmSeries method requires a bifbm spec");
      double h = b->hurst, a = b->alpha;
      route = [h, a, scale, policy](double t, double s) {
        SeriesResult r = bifbm_decomposition(h, a, t, s, policy);
        return RouteResult{scale * r.value, r.converged};
      };
      reference = closed;
      break;
    }
  }

  CrossValidationReport rep;
  rep.method = method;
  rep.grid.assign(grid.begin(), grid.end());
  for (size_t i = 0; i < grid.size(); ++i) {
    for (size_t j = i; j < grid.size(); ++j) {
      double t = grid[i], s = grid[j];
      RouteResult dec = route(t, s);
      double ref = reference(t, s);
      double dev = std::abs(dec.value - ref) / std::max(1.0, std::abs(ref));
      if (!dec.converged) rep.non_converged_pairs.emplace_back(t, s);
      if (t == s) {
        rep.diagonal_max_rel_dev = std::max(rep.diagonal_max_rel_dev, dev);
      } else if (dev > rep.max_rel_dev) {
        rep.max_rel_dev = dev;
        rep.argmax_t = t;
        rep.argmax_s = s;
      }
    }
  }
  return rep;
}

std::vector<double> fbm_b_series_terms(double hurst, double t, double s,
                                       int count) {
  const double h2 = 2.0 * hurst;
  const double mu = std::abs(t) + std::abs(s);
  const double k11 = mu - std::abs(t - s);
  std::vector<double> terms;
  terms.reserve(count);
  if (mu == 0.0 || count < 1) return terms;
  double term = k11 * special::gamma(1.0 - h2) / std::pow(mu, 1.0 - h2);
  for (int n = 1; n <= count; ++n) {
    terms.push_back(term);
    term *= (k11 / mu) * (n - h2) / (n + 1.0);
  }
  return terms;
}

std::vector<double> generator_series_terms(const ExponentialMoments& moments,
                                           double k, double mu, int count) {
  std::vector<double> terms;
  terms.reserve(count);
  if (k == 0.0 || count < 1) {
    terms.assign(std::max(count, 0), 0.0);
    return terms;
  }
  double term = k * moments.moment(1, mu);
  for (int n = 1; n <= count; ++n) {
    terms.push_back(term);
    term *= k * moments.moment_ratio(n, mu) / (n + 1.0);
  }
  return terms;
}

}  // namespace kk
