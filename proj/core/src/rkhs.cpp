#include "kernelkit/rkhs.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include "kernelkit/decompositions.hpp"
#include "kernelkit/errors.hpp"
#include "kernelkit/special.hpp"

namespace kk::rkhs {

std::complex<double> chi_atom(double s, double u) {
  const double x = s * u;
  if (std::abs(x) < 1e-4) {
    // (e^{ix}-1)/u = s * [ i(1 - x^2/6 + x^4/120) - (x/2)(1 - x^2/12) ] + O(x^6)
    double x2 = x * x;
    double re = -0.5 * x * (1.0 - x2 / 12.0 + x2 * x2 / 360.0);
    double im = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    return {s * re, s * im};
  }
  // cos(x)-1 = -2 sin^2(x/2) avoids cancellation in the real part
  double sh = std::sin(0.5 * x);
  return {-2.0 * sh * sh / u, std::sin(x) / u};
}

namespace {

std::atomic<uint64_t> g_node_set_counter{1};

}  // namespace

std::shared_ptr<const NodeSet> NodeSet::make(const WeightedMeasure& measure,
                                             const NodeParams& params) {
  measure.validate();
  auto set = std::make_shared<NodeSet>();
  set->measure_ = measure;
  set->id_ = g_node_set_counter.fetch_add(1);

  const double budget = params.tol * 1e-2;

  // Lower truncation: integrands behave like w(u) * O(1) near 0
  // (the atoms' product is bounded there), so int_0^{u_min} w must fit the
  // budget.
  double u_min = params.u_min_hint.value_or(1e-4);
  if (!params.u_min_hint) {
    const double sig = measure.sing0;
    if (sig + 1.0 > 0.05) {
      auto head_mass = [&measure, sig](double d) {
        // int_0^d w(u) du, exact for power laws
        return measure.weight(d) * d / (sig + 1.0);
      };
      while (u_min > 1e-280 &&
             head_mass(u_min) *
                     std::max(1.0, params.freq_max * params.freq_max) >
                 budget)
        u_min *= 0.1;
    } else {
      u_min = 1e-12;
    }
  }

  // Upper truncation: the non-resonant oscillatory remainder is
  // O(w(U)/U^2 / freq_min); the non-oscillatory remainder is corrected
  // analytically via dc_tail_mass.
  double u_max = params.u_max_hint.value_or(1e3);
  if (!params.u_max_hint) {
    while (u_max < params.u_max_cap &&
           2.0 * measure.weight(u_max) / (u_max * u_max) / params.freq_min >
               budget)
      u_max *= 2.0;
    u_max = std::min(u_max, params.u_max_cap);
  }
  set->u_max_ = u_max;

  const auto& rule = quad::gauss_legendre(12);
  auto add_panel = [&](double a, double b) {
    double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      double u = c + h * rule.nodes[i];
      set->nodes_.push_back(u);
      set->weights_.push_back(h * rule.weights[i] * measure.weight(u));
    }
  };

  // Log-spaced panels on (u_min, 1]: x = ln u, width <= 0.35 keeps the
  // phase change per panel small for frequencies of a few units.
  {
    double a = std::log(u_min), b = std::log(std::min(1.0, u_max));
    if (b > a) {
      int n = (int)std::ceil((b - a) / 0.35);
      for (int i = 0; i < n; ++i)
        add_panel(std::exp(a + (b - a) * i / n),
                  std::exp(a + (b - a) * (i + 1) / n));
    }
  }
  // Linear panels on [1, u_max], capped at a half period of the fastest
  // resolved oscillation.
  if (u_max > 1.0) {
    double cap = std::numbers::pi / params.freq_max;
    long n = (long)std::ceil((u_max - 1.0) / cap);
    double w = (u_max - 1.0) / n;
    for (long i = 0; i < n; ++i)
      add_panel(1.0 + w * i, 1.0 + w * (i + 1));
  }

  // Analytic non-oscillatory tail mass int_{u_max}^inf w/u^2 du.
  if (measure.family == MeasureFamily::PowerLaw) {
    double p = measure.exponent - 2.0;  // w/u^2 ~ c u^{p-2}
    set->dc_tail_mass_ = measure.normalization * measure.coeff *
                         std::pow(u_max, p + 1.0) / (-p - 1.0);
  } else if (measure.decay == TailDecay::Exponential) {
    set->dc_tail_mass_ = 0.0;  // beyond machine precision for u_max >= ~700
  } else {
    auto g = [&measure](double v) {
      double u = 1.0 / v;
      return measure.weight(u);  // w(1/v)/ (1/v)^2 / v^2 = w(1/v)
    };
    quad::Options opts;
    opts.rel_tol = 1e-10;
    set->dc_tail_mass_ =
        quad::integrate_power_endpoint(g, 1.0 / u_max, -measure.tail_exponent,
                                       opts)
            .value;
  }
  return set;
}

std::shared_ptr<const NodeSet> NodeSet::from_nodes(
    const WeightedMeasure& measure, std::vector<double> nodes,
    std::vector<double> weights) {
  if (nodes.empty() || nodes.size() != weights.size())
    throw DomainError("from_nodes: node/weight shape mismatch");
  double prev = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > prev))
      throw DomainError("from_nodes: nodes must be strictly increasing and positive");
    if (!(weights[i] >= 0.0))
      throw DomainError("from_nodes: weights must be nonnegative");
    prev = nodes[i];
  }
  auto set = std::make_shared<NodeSet>();
  set->measure_ = measure;
  set->id_ = g_node_set_counter.fetch_add(1);
  set->u_max_ = nodes.back();
  set->nodes_ = std::move(nodes);
  set->weights_ = std::move(weights);
  if (measure.family == MeasureFamily::PowerLaw) {
    double p = measure.exponent - 2.0;
    set->dc_tail_mass_ = measure.normalization * measure.coeff *
                         std::pow(set->u_max_, p + 1.0) / (-p - 1.0);
  } else {
    set->dc_tail_mass_ = 0.0;
  }
  return set;
}

SpectralElement::SpectralElement(std::shared_ptr<const NodeSet> nodes,
                                 std::vector<std::complex<double>> values,
                                 std::vector<AtomComponent> atoms)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      atoms_(std::move(atoms)) {
  if (!nodes_) throw DomainError("spectral element requires a node set");
  if (values_.size() != nodes_->nodes().size())
    throw DomainError("spectral element value count mismatch");
}

SpectralElement SpectralElement::zero(std::shared_ptr<const NodeSet> nodes) {
  std::vector<std::complex<double>> v(nodes->nodes().size(), {0.0, 0.0});
  return SpectralElement(std::move(nodes), std::move(v));
}

SpectralElement SpectralElement::chi(std::shared_ptr<const NodeSet> nodes,
                                     double s) {
  if (s == 0.0) return zero(std::move(nodes));  // chi_0 vanishes identically
  std::vector<std::complex<double>> v;
  v.reserve(nodes->nodes().size());
  for (double u : nodes->nodes()) v.push_back(chi_atom(s, u));
  return SpectralElement(std::move(nodes), std::move(v),
                         {AtomComponent{s, {1.0, 0.0}}});
}

SpectralElement SpectralElement::from_values(
    std::shared_ptr<const NodeSet> nodes,
    const std::function<std::complex<double>(double)>& f) {
  std::vector<std::complex<double>> v;
  v.reserve(nodes->nodes().size());
  for (double u : nodes->nodes()) v.push_back(f(u));
  return SpectralElement(std::move(nodes), std::move(v));
}

SpectralElement SpectralElement::scaled(std::complex<double> c) const {
  std::vector<std::complex<double>> v(values_);
  for (auto& x : v) x *= c;
  std::vector<AtomComponent> a(atoms_);
  for (auto& comp : a) comp.coeff *= c;
  return SpectralElement(nodes_, std::move(v), std::move(a));
}

SpectralElement SpectralElement::plus(const SpectralElement& other) const {
  if (nodes_->id() != other.nodes_->id())
    throw NodeSetMismatch("elements live on different node sets");
  std::vector<std::complex<double>> v(values_);
  for (size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  // Atom structures union; an element without atoms contributes no tail
  // (zero and rapidly decaying elements).
  std::vector<AtomComponent> a = atoms_;
  for (const auto& comp : other.atoms_) {
    bool merged = false;
    for (auto& mine : a)
      if (mine.anchor == comp.anchor) {
        mine.coeff += comp.coeff;
        merged = true;
        break;
      }
    if (!merged) a.push_back(comp);
  }
  return SpectralElement(nodes_, std::move(v), std::move(a));
}

namespace {

// Tail model of f*conj(g) beyond u_max for chi-span elements: each atom
// contributes (e^{is u} - 1)/u, so the product's non-oscillatory component
// is [gamma_f conj(gamma_g) + sum over equal anchors c_j conj(d_k)] / u^2
// with gamma = -sum(c_j). Oscillatory components integrate to
// O(w(U)/U^2/freq) and are neglected (node budget covers them).
std::complex<double> tail_dc_coefficient(const SpectralElement& f,
                                         const SpectralElement& g) {
  if (f.atoms().empty() && g.atoms().empty()) return {0.0, 0.0};
  std::complex<double> gf{0.0, 0.0}, gg{0.0, 0.0};
  for (const auto& a : f.atoms()) gf -= a.coeff;
  for (const auto& b : g.atoms()) gg -= b.coeff;
  std::complex<double> dc = gf * std::conj(gg);
  for (const auto& a : f.atoms())
    for (const auto& b : g.atoms())
      if (a.anchor == b.anchor && a.anchor != 0.0)
        dc += a.coeff * std::conj(b.coeff);
  return dc;
}

std::complex<double> half_line_sum(const SpectralElement& f,
                                   const SpectralElement& g) {
  const auto& w = f.node_set().weights();
  const auto& fv = f.values();
  const auto& gv = g.values();
  quad::KahanSum re, im;
  for (size_t i = 0; i < w.size(); ++i) {
    std::complex<double> p = fv[i] * std::conj(gv[i]);
    re.add(w[i] * p.real());
    im.add(w[i] * p.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace

double inner_product(const SpectralElement& f, const SpectralElement& g) {
  if (f.node_set().id() != g.node_set().id())
    throw NodeSetMismatch("inner_product: elements on different node sets");
  std::complex<double> s = half_line_sum(f, g);
  s += tail_dc_coefficient(f, g) * f.node_set().dc_tail_mass();
  return 2.0 * s.real();
}

double rkhs_norm(const SpectralElement& f) {
  double n2 = inner_product(f, f);
  return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

InducedValue induced_function(const SpectralElement& f, double t) {
  SpectralElement chi_t = SpectralElement::chi(f.node_set_ptr(), t);
  std::complex<double> s = half_line_sum(f, chi_t);
  s += tail_dc_coefficient(f, chi_t) * f.node_set().dc_tail_mass();
  // Full line = half-line sum plus its mirror, which is the conjugate; the
  // imaginary parts cancel exactly for the implied admissible extension.
  std::complex<double> full = s + std::conj(s);
  InducedValue res;
  res.value = full.real();
  res.imag_residual = std::abs(full.imag());
  if (res.imag_residual > 1e-8 * std::max(1.0, std::abs(res.value)))
    throw ImaginaryLeak("induced function has a non-real full-line sum");
  return res;
}

double power_law_kernel_reference(const WeightedMeasure& measure, double t,
                                  double s) {
  if (measure.family != MeasureFamily::PowerLaw)
    throw MethodMismatch("closed kernel reference needs a power-law measure");
  double p = measure.exponent;
  if (!(p > -1.0 && p < 1.0))
    throw DomainError("power-law exponent outside the fBm range (-1,1)");
  double hurst = 0.5 * (1.0 - p);
  double c = measure.normalization * measure.coeff * std::numbers::pi *
             special::v_h(hurst);
  double h2 = 2.0 * hurst;
  return c * (std::pow(std::abs(t), h2) + std::pow(std::abs(s), h2) -
              std::pow(std::abs(t - s), h2));
}

double atom_gram_check(const WeightedMeasure& measure,
                       std::span<const double> grid, double tol) {
  if (grid.empty()) throw EmptyGrid("atom_gram_check: grid is empty");
  AdmissibilityReport rep = admissible(measure, MeasureRole::SpectralKrein);
  if (!rep.admissible)
    throw NonIntegrable("measure is not spectral-admissible: " +
                        rep.diagnostic);

  NodeParams params;
  params.tol = tol;
  double fmax = 0.0, fmin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < grid.size(); ++i)
    for (size_t j = i; j < grid.size(); ++j) {
      for (double fr : {std::abs(grid[i]), std::abs(grid[j]),
                        std::abs(grid[i] - grid[j]),
                        std::abs(grid[i] + grid[j])}) {
        fmax = std::max(fmax, fr);
        if (fr > 0.0) fmin = std::min(fmin, fr);
      }
    }
  params.freq_max = std::max(1.0, fmax);
  params.freq_min = std::isfinite(fmin) ? fmin : 1.0;
  auto nodes = NodeSet::make(measure, params);

  std::vector<SpectralElement> atoms;
  atoms.reserve(grid.size());
  for (double t : grid) atoms.push_back(SpectralElement::chi(nodes, t));

  const bool closed_ref = measure.family == MeasureFamily::PowerLaw;
  double worst = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    for (size_t j = i; j < grid.size(); ++j) {
      double g = inner_product(atoms[i], atoms[j]);
      double ref = closed_ref
                       ? power_law_kernel_reference(measure, grid[i], grid[j])
                       : spectral_kernel(measure, grid[i], grid[j], 1e-9).value;
      worst = std::max(worst,
                       std::abs(g - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  return worst;
}

namespace {

void require_lebesgue(const WeightedMeasure& m) {
  bool ok = m.family == MeasureFamily::PowerLaw && m.exponent == 0.0 &&
            m.coeff * m.normalization == 1.0;
  if (!ok)
    throw MeasureMismatch("sobolev routes require the Lebesgue measure dm=du");
}

}  // namespace

double sobolev_derivative(const SpectralElement& f, double s) {
  require_lebesgue(f.node_set().measure());
  // ftilde(s) = 2 int_0^inf Im(f(u) e^{-ius}) du over the folded element.
  const auto& nodes = f.node_set().nodes();
  const auto& w = f.node_set().weights();
  quad::KahanSum acc;
  for (size_t i = 0; i < nodes.size(); ++i) {
    double cu = std::cos(s * nodes[i]), su = std::sin(s * nodes[i]);
    acc.add(w[i] * (f.values()[i].imag() * cu - f.values()[i].real() * su));
  }
  return 2.0 * acc.value();
}

SobolevResult sobolev_primitive(const SpectralElement& f, double t) {
  require_lebesgue(f.node_set().measure());
  SobolevResult res;
  res.induced = induced_function(f, t).value;
  if (t == 0.0) return res;
  quad::Options opts;
  opts.rel_tol = 1e-9;
  opts.max_panels = 512;
  quad::Result r = quad::integrate_interval(
      [&f](double s) { return sobolev_derivative(f, s); }, std::min(0.0, t),
      std::max(0.0, t), opts);
  res.primitive = t > 0.0 ? r.value : -r.value;
  return res;
}

}  // namespace kk::rkhs
