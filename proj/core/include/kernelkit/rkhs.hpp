#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kernelkit/measures.hpp"

namespace kk::rkhs {

// chi_s(u) = (e^{isu} - 1)/u, with the Taylor limit i*s at u = 0; series
// evaluation below |su| = 1e-4 keeps the relative error within 1e-14.
std::complex<double> chi_atom(double s, double u);

struct NodeParams {
  double tol = 1e-8;       // discretization error budget
  double freq_max = 4.0;   // largest oscillation frequency to resolve
  double freq_min = 0.5;   // smallest nonzero pair frequency (tail sizing)
  double u_max_cap = 4e5;  // hard ceiling on the upper truncation point
  std::optional<double> u_min_hint;
  std::optional<double> u_max_hint;
};

// Shared quadrature node/weight set for a measure: log-spaced panels on
// (u_min, 1], oscillation-capped linear panels on [1, u_max]. Weights
// incorporate w(u_k). Elements on different node sets never mix.
class NodeSet {
public:
  static std::shared_ptr<const NodeSet> make(const WeightedMeasure& measure,
                                             const NodeParams& params = {});
  // Wraps explicit nodes/weights (CSV import). Weights must already
  // incorporate w(u_k).
  static std::shared_ptr<const NodeSet> from_nodes(
      const WeightedMeasure& measure, std::vector<double> nodes,
      std::vector<double> weights);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const WeightedMeasure& measure() const { return measure_; }
  double u_max() const { return u_max_; }
  // int_{u_max}^inf w(u)/u^2 du: the non-oscillatory tail mass used by the
  // atom tail model.
  double dc_tail_mass() const { return dc_tail_mass_; }
  uint64_t id() const { return id_; }

private:
  friend class SpectralElement;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  WeightedMeasure measure_;
  double u_max_ = 0.0;
  double dc_tail_mass_ = 0.0;
  uint64_t id_ = 0;
};

// A chi-span component: coefficient c against the atom anchored at s.
struct AtomComponent {
  double anchor = 0.0;
  std::complex<double> coeff{0.0, 0.0};
};

// Discretized element of L^2(dm) on (0,inf). Values are the restriction of
// the full-line element to u > 0; the u < 0 half is implied by the
// conjugation symmetry f(-u) = -conj(f(u)) of the chi-span, so inner
// products are 2*Re of the half-line sums.
//
// Elements assembled from atoms carry their span structure; it feeds an
// analytic correction for the non-oscillatory tail beyond u_max (amplitude
// gamma = -sum(c_j) plus anchor-resonance terms), which finite node sets
// cannot capture for slowly decaying spectral measures.
class SpectralElement {
public:
  SpectralElement() = default;
  SpectralElement(std::shared_ptr<const NodeSet> nodes,
                  std::vector<std::complex<double>> values,
                  std::vector<AtomComponent> atoms = {});

  static SpectralElement zero(std::shared_ptr<const NodeSet> nodes);
  static SpectralElement chi(std::shared_ptr<const NodeSet> nodes, double s);
  static SpectralElement from_values(
      std::shared_ptr<const NodeSet> nodes,
      const std::function<std::complex<double>(double)>& f);

  SpectralElement scaled(std::complex<double> c) const;
  SpectralElement plus(const SpectralElement& other) const;

  const NodeSet& node_set() const { return *nodes_; }
  std::shared_ptr<const NodeSet> node_set_ptr() const { return nodes_; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  const std::vector<AtomComponent>& atoms() const { return atoms_; }

private:
  std::shared_ptr<const NodeSet> nodes_;
  std::vector<std::complex<double>> values_;
  std::vector<AtomComponent> atoms_;
};

// <f, g> in the discretized full-line L^2(dm): 2*Re(sum w f conj(g)) plus
// the tail model. Throws NodeSetMismatch when the elements live on
// different node sets.
double inner_product(const SpectralElement& f, const SpectralElement& g);

double rkhs_norm(const SpectralElement& f);

struct InducedValue {
  double value = 0.0;
  double imag_residual = 0.0;  // realness defect of the full-line sum
};

// F(t) = <f, chi_t>: the function induced by the element f. The residual is
// required < 1e-8 (ImaginaryLeak otherwise); with folded storage the
// implied extension is admissible by construction, so it is ~0.
InducedValue induced_function(const SpectralElement& f, double t);

// Max over grid pairs of |<chi_t, chi_s> - K_r(t,s)| / max(1, |K_r|), where
// K_r is the closed-form kernel of the measure (PowerLaw family) or the
// spectral quadrature otherwise.
double atom_gram_check(const WeightedMeasure& measure,
                       std::span<const double> grid, double tol = 1e-8);

// Closed-form reference kernel of a PowerLaw spectral measure:
// c*pi*V_H * (|t|^{2H}+|s|^{2H}-|t-s|^{2H}) with H = (1-p)/2.
double power_law_kernel_reference(const WeightedMeasure& measure, double t,
                                  double s);

struct SobolevResult {
  double induced = 0.0;    // route 1: <f, chi_t>
  double primitive = 0.0;  // route 2: int_0^t ftilde(s) ds
};

// The Lebesgue specialization: F(t) equals the primitive of the Fourier
// transform of the (implied full-line) element. Both routes are returned;
// they must agree for admissible f. MeasureMismatch unless dm(u) = du.
SobolevResult sobolev_primitive(const SpectralElement& f, double t);

// ftilde(s): the integrand of the primitive route (and dF/dt).
double sobolev_derivative(const SpectralElement& f, double s);

}  // namespace kk::rkhs
