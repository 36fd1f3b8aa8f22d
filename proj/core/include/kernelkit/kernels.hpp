#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kernelkit/measures.hpp"
#include "kernelkit/special.hpp"

namespace kk {

// Even generator r with r(0)=0 for Krein-type kernels r(t)+r(s)-r(t-s).
// Named forms keep the closed form and (when known) the representing
// Bernstein measure with r(t) = int (1-e^{-u|t|}) dm(u) together.
struct GeneratorFunction {
  std::function<double(double)> closed_form;
  std::optional<WeightedMeasure> representing_measure;
  std::string form;    // "abs" | "power" | "log1p" | "bernstein"
  double param = 0.0;  // exponent for "power"

  double operator()(double t) const { return closed_form(t); }

  static GeneratorFunction absolute();          // r(t) = |t|
  static GeneratorFunction power(double e);     // r(t) = |t|^e, e in (0,2)
  static GeneratorFunction log1p_abs();         // r(t) = ln(1+|t|)
  static GeneratorFunction from_measure(const WeightedMeasure& m);

  // Probes r(0)=0 and evenness on a small grid.
  void validate() const;
};

struct Fbm {
  double hurst;
};
struct BiFbm {
  double hurst;
  double alpha;
};
struct Krein {
  GeneratorFunction r;
};
struct BernsteinComposite {
  GeneratorFunction r;
  special::BernsteinFunction phi;
};
struct LogKernel {};

struct KernelSpec {
  std::variant<Fbm, BiFbm, Krein, BernsteinComposite, LogKernel> variant;
  double scale = 1.0;

  static KernelSpec fbm(double hurst);
  static KernelSpec bifbm(double hurst, double alpha);
  static KernelSpec krein(GeneratorFunction r);
  static KernelSpec bernstein_composite(GeneratorFunction r,
                                        WeightedMeasure phi_measure);
  static KernelSpec log_kernel();
};

double eval_closed(const KernelSpec& spec, double t, double s);

class GramMatrix {
public:
  GramMatrix() = default;
  GramMatrix(std::vector<double> grid, std::vector<double> entries);

  size_t size() const { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& entries() const { return entries_; }
  double operator()(size_t i, size_t j) const {
    return entries_[i * grid_.size() + j];
  }

private:
  std::vector<double> grid_;
  std::vector<double> entries_;  // row-major, symmetric by construction
};

GramMatrix gram(const KernelSpec& spec, std::span<const double> grid);

struct PsdCertificate {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool passed = false;
  double tolerance_used = 0.0;
};

// Extreme eigenvalues of the symmetric matrix; passes iff
// min_eigenvalue >= -tol * max(1, max_eigenvalue).
PsdCertificate psd_certificate(const GramMatrix& g, double tol = 1e-10);

// Entrywise combinations used by the closure properties of sums and products
// of positive kernels.
GramMatrix entrywise_sum(const GramMatrix& a, const GramMatrix& b);
GramMatrix entrywise_product(const GramMatrix& a, const GramMatrix& b);

}  // namespace kk
