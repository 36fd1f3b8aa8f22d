#include "kernelkit/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kernelkit/errors.hpp"

namespace kk {

GeneratorFunction GeneratorFunction::absolute() {
  GeneratorFunction g;
  g.closed_form = [](double t) { return std::abs(t); };
  g.form = "abs";
  g.param = 1.0;
  return g;
}

GeneratorFunction GeneratorFunction::power(double e) {
  if (!(e > 0.0 && e < 2.0))
    throw DomainError("generator power exponent must lie in (0,2)");
  GeneratorFunction g;
  g.closed_form = [e](double t) { return std::pow(std::abs(t), e); };
  g.form = "power";
  g.param = e;
  if (e < 1.0)
    g.representing_measure = WeightedMeasure::fbm_bernstein(0.5 * e);
  return g;
}

GeneratorFunction GeneratorFunction::log1p_abs() {
  GeneratorFunction g;
  g.closed_form = [](double t) { return std::log1p(std::abs(t)); };
  g.form = "log1p";
  g.representing_measure = WeightedMeasure::exp_over_u();
  return g;
}

GeneratorFunction GeneratorFunction::from_measure(const WeightedMeasure& m) {
  special::BernsteinFunction phi(m);
  GeneratorFunction g;
  g.closed_form = [phi](double t) {
    return special::bernstein_eval(phi, std::abs(t));
  };
  g.representing_measure = m;
  g.form = "bernstein";
  return g;
}

void GeneratorFunction::validate() const {
  if (!closed_form) throw DomainError("generator has no closed form");
  if (std::abs(closed_form(0.0)) > 1e-12)
    throw DomainError("generator must satisfy r(0)=0");
  for (double t : {0.25, 1.0, 3.5}) {
    double a = closed_form(t), b = closed_form(-t);
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
      throw DomainError("generator must be even");
  }
}

KernelSpec KernelSpec::fbm(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("fbm: H must lie in (0,1)");
  return KernelSpec{Fbm{hurst}, 1.0};
}

KernelSpec KernelSpec::bifbm(double hurst, double alpha) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("bifbm: H must lie in (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("bifbm: alpha must lie in (0,1]");
  return KernelSpec{BiFbm{hurst, alpha}, 1.0};
}

KernelSpec KernelSpec::krein(GeneratorFunction r) {
  r.validate();
  return KernelSpec{Krein{std::move(r)}, 1.0};
}

KernelSpec KernelSpec::bernstein_composite(GeneratorFunction r,
                                           WeightedMeasure phi_measure) {
  r.validate();
  return KernelSpec{
      BernsteinComposite{std::move(r),
                         special::BernsteinFunction(std::move(phi_measure))},
      1.0};
}

KernelSpec KernelSpec::log_kernel() { return KernelSpec{LogKernel{}, 1.0}; }

namespace {

// |t-s| is always formed directly; expanding through |t|,|s| loses digits
// for t close to s.
double fbm_closed(double hurst, double t, double s) {
  double h2 = 2.0 * hurst;
  return std::pow(std::abs(t), h2) + std::pow(std::abs(s), h2) -
         std::pow(std::abs(t - s), h2);
}

}  // namespace

double eval_closed(const KernelSpec& spec, double t, double s) {
  double v = std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Fbm>) {
          return fbm_closed(k.hurst, t, s);
        } else if constexpr (std::is_same_v<T, BiFbm>) {
          double h2 = 2.0 * k.hurst;
          double sum = std::pow(std::abs(t), h2) + std::pow(std::abs(s), h2);
          return std::pow(sum, k.alpha) -
                 std::pow(std::abs(t - s), h2 * k.alpha);
        } else if constexpr (std::is_same_v<T, Krein>) {
          return k.r(t) + k.r(s) - k.r(t - s);
        } else if constexpr (std::is_same_v<T, BernsteinComposite>) {
          double inner = k.r(t) + k.r(s);
          return special::bernstein_eval(k.phi, inner) -
                 special::bernstein_eval(k.phi, k.r(t - s));
        } else {
          return std::log1p(std::abs(t)) + std::log1p(std::abs(s)) -
                 std::log1p(std::abs(t - s));
        }
      },
      spec.variant);
  return spec.scale * v;
}

GramMatrix::GramMatrix(std::vector<double> grid, std::vector<double> entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
  if (entries_.size() != grid_.size() * grid_.size())
    throw DomainError("gram matrix shape mismatch");
}

GramMatrix gram(const KernelSpec& spec, std::span<const double> grid) {
  if (grid.empty()) throw EmptyGrid("gram: grid is empty");
  for (double t : grid)
    if (!std::isfinite(t)) throw DomainError("gram: grid entries must be finite");
  const size_t n = grid.size();
  std::vector<double> e(n * n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= i; ++j) {
      double v = eval_closed(spec, grid[i], grid[j]);
      e[i * n + j] = v;
      e[j * n + i] = v;  // symmetry exact by construction
    }
  return GramMatrix(std::vector<double>(grid.begin(), grid.end()),
                    std::move(e));
}

PsdCertificate psd_certificate(const GramMatrix& g, double tol) {
  const size_t n = g.size();
  if (n == 0) throw EmptyGrid("psd_certificate: empty gram matrix");
  Eigen::MatrixXd m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m(i, j) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalBreakdown("symmetric eigensolver failed to converge");
  PsdCertificate cert;
  cert.min_eigenvalue = solver.eigenvalues().minCoeff();
  cert.max_eigenvalue = solver.eigenvalues().maxCoeff();
  cert.tolerance_used = tol;
  cert.passed = cert.min_eigenvalue >=
                -tol * std::max(1.0, cert.max_eigenvalue);
  return cert;
}

namespace {

GramMatrix combine(const GramMatrix& a, const GramMatrix& b, bool product) {
  if (a.size() != b.size() || a.grid() != b.grid())
    throw DomainError("entrywise combination requires identical grids");
  std::vector<double> e(a.entries().size());
  for (size_t i = 0; i < e.size(); ++i)
    e[i] = product ? a.entries()[i] * b.entries()[i]
                   : a.entries()[i] + b.entries()[i];
  return GramMatrix(a.grid(), std::move(e));
}

}  // namespace

GramMatrix entrywise_sum(const GramMatrix& a, const GramMatrix& b) {
  return combine(a, b, false);
}

GramMatrix entrywise_product(const GramMatrix& a, const GramMatrix& b) {
  return combine(a, b, true);
}

}  // namespace kk
