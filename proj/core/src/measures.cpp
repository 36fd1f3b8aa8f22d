#include "kernelkit/measures.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kernelkit/errors.hpp"
#include "kernelkit/special.hpp"

namespace kk {

double WeightedMeasure::weight(double u) const {
  double w;
  switch (family) {
    case MeasureFamily::PowerLaw:
      w = coeff * std::pow(u, exponent);
      break;
    case MeasureFamily::ExpOverU:
      w = std::exp(-u) / u;
      break;
    case MeasureFamily::Custom:
      w = density(u);
      break;
    default:
      w = 0.0;
  }
  return normalization * w;
}

WeightedMeasure WeightedMeasure::power_law(double c, double p) {
  if (!(c > 0.0)) throw DomainError("power_law: c must be positive");
  WeightedMeasure m;
  m.family = MeasureFamily::PowerLaw;
  m.coeff = c;
  m.exponent = p;
  m.sing0 = p;
  m.decay = TailDecay::Power;
  m.tail_exponent = p;
  return m;
}

WeightedMeasure WeightedMeasure::exp_over_u() {
  WeightedMeasure m;
  m.family = MeasureFamily::ExpOverU;
  m.sing0 = -1.0;
  m.decay = TailDecay::Exponential;
  return m;
}

WeightedMeasure WeightedMeasure::custom(std::function<double(double)> density,
                                        double sing0, TailDecay decay,
                                        double tail_exponent) {
  WeightedMeasure m;
  m.family = MeasureFamily::Custom;
  m.density = std::move(density);
  m.sing0 = sing0;
  m.decay = decay;
  m.tail_exponent = tail_exponent;
  return m;
}

WeightedMeasure WeightedMeasure::fbm_spectral(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("fbm_spectral: H must lie in (0,1)");
  return power_law(1.0 / std::numbers::pi, 1.0 - 2.0 * hurst);
}

WeightedMeasure WeightedMeasure::fbm_bernstein(double hurst) {
  if (!(hurst > 0.0 && hurst < 0.5))
    throw DomainError("fbm_bernstein: H must lie in (0,1/2)");
  return power_law(2.0 * hurst / special::gamma(1.0 - 2.0 * hurst),
                   -1.0 - 2.0 * hurst);
}

void WeightedMeasure::validate() const {
  if (!(normalization > 0.0))
    throw DomainError("measure normalization must be positive");
  if (family == MeasureFamily::Custom && !density)
    throw DomainError("custom measure requires a density");
  // Nonnegativity on a log-spaced probe grid.
  for (int k = -24; k <= 24; ++k) {
    double u = std::pow(10.0, 0.25 * k);
    double w = weight(u);
    if (!(w >= 0.0) && std::isfinite(w))
      throw DomainError("measure density is negative at u=" +
                        std::to_string(u));
  }
  // Declared sing0 vs numerical slope of log w on [1e-8, 1e-4].
  double w_lo = weight(1e-8);
  double w_hi = weight(1e-4);
  if (w_lo > 0.0 && w_hi > 0.0 && std::isfinite(w_lo) && std::isfinite(w_hi)) {
    double slope = (std::log(w_hi) - std::log(w_lo)) /
                   (std::log(1e-4) - std::log(1e-8));
    if (std::abs(slope - sing0) > 0.1) {
      std::ostringstream os;
      os << "declared sing0=" << sing0 << " but numerical slope is " << slope;
      throw DomainError(os.str());
    }
  }
}

namespace {

struct EffectiveOrders {
  double zero;        // (f*w)(u) ~ u^zero as u -> 0+
  double tail;        // (f*w)(u) ~ u^tail as u -> inf (when algebraic)
  bool tail_is_exp;   // exponential decay declared on either factor
  bool tail_known;
};

EffectiveOrders effective_orders(const WeightedMeasure& m,
                                 const IntegrandTraits& t) {
  EffectiveOrders e;
  e.zero = m.sing0 + t.zero_order;
  e.tail_is_exp =
      t.decays_exponentially || m.decay == TailDecay::Exponential;
  e.tail_known = e.tail_is_exp || m.decay == TailDecay::Power;
  e.tail = (m.decay == TailDecay::Power ? m.tail_exponent : 0.0) +
           t.tail_order;
  return e;
}

}  // namespace

QuadratureResult integrate(const quad::Integrand& integrand,
                           const WeightedMeasure& measure, double tol,
                           std::optional<double> oscillation_scale,
                           const IntegrandTraits& traits) {
  if (!(tol > 0.0 && tol <= 1e-2))
    throw DomainError("integrate: tol must lie in (0, 1e-2]");

  const EffectiveOrders orders = effective_orders(measure, traits);
  if (orders.zero <= -1.0)
    throw NonIntegrable("integrand*density diverges at u=0 (declared order " +
                        std::to_string(orders.zero) + ")");
  if (!orders.tail_is_exp) {
    if (!orders.tail_known)
      throw UnknownTail("measure has no declared tail behavior");
    if (orders.tail >= -1.0)
      throw NonIntegrable("integrand*density diverges at infinity (declared "
                          "order " +
                          std::to_string(orders.tail) + ")");
  }

  auto fw = [&](double u) {
    double fv = integrand(u);
    if (fv == 0.0) return 0.0;  // avoid 0 * inf against singular weights
    return fv * measure.weight(u);
  };

  quad::Options opts;
  opts.rel_tol = tol * 0.25;

  // (0, 1]: power substitution from the combined endpoint order.
  quad::Result head =
      quad::integrate_power_endpoint(fw, 1.0, orders.zero, opts);

  // [1, inf).
  quad::Result tail;
  double scale_hint = std::abs(head.value);
  if (oscillation_scale && *oscillation_scale > 0.0) {
    // Finite stretch with half-period-capped panels, then the extrapolated
    // periodic tail.
    const double freq = *oscillation_scale;
    const double cap = std::numbers::pi / freq;
    double split = std::max(2.0, 16.0 * std::numbers::pi / freq);
    quad::Options mid_opts = opts;
    mid_opts.max_width = cap;
    mid_opts.abs_floor = tol * 0.25 * scale_hint * 1e-2;
    quad::Result mid = quad::integrate_interval(fw, 1.0, split, mid_opts);
    double theta = orders.tail_is_exp ? -1.0 : -(orders.tail + 1.0);
    quad::Options tail_opts = opts;
    tail_opts.abs_floor =
        tol * 0.25 * std::max(scale_hint, std::abs(mid.value)) * 1e-2;
    quad::Result far = quad::oscillatory_tail(fw, split, freq, theta, tail_opts);
    tail.value = mid.value + far.value;
    tail.abs_error = mid.abs_error + far.abs_error;
    tail.panels = mid.panels + far.panels;
    tail.converged = mid.converged && far.converged;
  } else {
    // u = 1/v maps [1,inf) to (0,1]; algebraic tails become a power
    // singularity at v=0 with known exponent, exponential tails vanish to
    // all orders.
    auto g = [&fw](double v) {
      double u = 1.0 / v;
      double val = fw(u);
      if (val == 0.0) return 0.0;
      return val / (v * v);
    };
    double sigma_v = orders.tail_is_exp ? 0.0 : (-orders.tail - 2.0);
    tail = quad::integrate_power_endpoint(g, 1.0, sigma_v, opts);
  }

  QuadratureResult res;
  res.value = head.value + tail.value;
  res.abs_error_estimate = head.abs_error + tail.abs_error;
  res.panels = head.panels + tail.panels;
  res.converged = head.converged && tail.converged &&
                  res.abs_error_estimate <=
                      tol * std::max(1e-300, std::abs(res.value)) * 1.01 +
                          tol * 1e-14;
  return res;
}

AdmissibilityReport admissible(const WeightedMeasure& measure,
                               MeasureRole role) {
  AdmissibilityReport rep;
  std::ostringstream os;

  bool tail_ok;
  if (measure.decay == TailDecay::Exponential) {
    tail_ok = true;
    os << "tail: exponential decay; ";
  } else if (measure.decay == TailDecay::Power) {
    double p = measure.tail_exponent;
    tail_ok = role == MeasureRole::SpectralKrein ? p < 1.0 : p < -1.0;
    os << "tail: u^" << p
       << (role == MeasureRole::SpectralKrein ? " against 1/(u^2+1), needs p<1"
                                              : ", needs p<-1")
       << (tail_ok ? " (ok); " : " (fails); ");
  } else {
    throw UnknownTail("custom measure lacks a declared tail decay");
  }

  // Endpoint condition at u -> 0: the kernel integrand contributes u^0
  // (SpectralKrein, (1-cos tu)/u^2) or u^1 (Bernstein, 1-e^{-u|t|}).
  double lift = role == MeasureRole::SpectralKrein ? 0.0 : 1.0;
  bool head_ok = measure.sing0 + lift > -1.0;
  os << "endpoint: u^" << measure.sing0 << " with integrand lift u^" << lift
     << (head_ok ? " (ok)" : " (fails)");

  rep.admissible = tail_ok && head_ok;
  rep.diagnostic = os.str();
  return rep;
}

}  // namespace kk
