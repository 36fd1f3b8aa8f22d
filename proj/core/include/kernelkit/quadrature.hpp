#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace kk::quad {

// Compensated (Neumaier) accumulator. All panel and series sums go through
// this so that summation order, not floating-point luck, decides the result.
class KahanSum {
public:
  void add(double x) noexcept {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_floor = 0.0;    // stop once total error estimate is below this
  int max_panels = 4000;
  double max_width = std::numeric_limits<double>::infinity();
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
  bool converged = true;
};

using Integrand = std::function<double(double)>;

// n-point Gauss-Legendre rule on [-1,1]; nodes/weights generated by Newton
// iteration on the Legendre recurrence and cached per n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

double gl_panel(const Integrand& f, double a, double b, int n = 12);

// Globally adaptive integration of f over the finite interval [a,b].
// Panels wider than opts.max_width are split before error control starts.
Result integrate_interval(const Integrand& f, double a, double b,
                          const Options& opts);

// Integrates f over (0,b] where f ~ u^sigma as u->0+ (sigma > -1), using the
// substitution u = v^k with k chosen so the transformed integrand is C^2 at 0.
Result integrate_power_endpoint(const Integrand& f, double b, double sigma,
                                const Options& opts);
int softening_exponent(double sigma);

// Richardson extrapolation with a known exponent ladder: assumes
//   S_j = S + n_j^{-theta0} * (c0 + c1/n_j + c2/n_j^2 + ...)
// and eliminates `levels` leading terms. Returns the extrapolated limit and
// an error estimate (difference of the last two elimination stages).
double richardson_known_exponent(const std::vector<double>& n,
                                 const std::vector<double>& s, double theta0,
                                 int levels, double* err_estimate);

// Iterated Shanks transformation (Wynn epsilon, even columns) on the tail of
// a partial-sum sequence. Effective for geometrically converging sequences.
double shanks(const std::vector<double>& s, double* err_estimate);

// Integral over [from, inf) of an integrand whose oscillation has (single)
// angular frequency `freq`: marches full-period blocks of two half-period
// Gauss panels and extrapolates the block partial sums.
//   theta0 : known decay exponent of the remainder (S - S_J ~ U_J^{-theta0});
//            pass <= 0 when unknown (falls back to plain truncation).
Result oscillatory_tail(const Integrand& f, double from, double freq,
                        double theta0, const Options& opts);

}  // namespace kk::quad
