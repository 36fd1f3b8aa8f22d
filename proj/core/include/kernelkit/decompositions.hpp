#pragma once

#include <span>
#include <utility>
#include <vector>

#include "kernelkit/kernels.hpp"
#include "kernelkit/measures.hpp"
#include "kernelkit/moments.hpp"

namespace kk {

struct TruncationPolicy {
  enum class Acceleration { None, Shanks, Richardson };

  double rel_tol = 1e-10;
  int n_max = 500;
  Acceleration acceleration = Acceleration::None;
};

struct SeriesResult {
  double value = 0.0;
  int n_terms = 0;
  double tail_estimate = 0.0;
  double integral_part = 0.0;  // 0 when the decomposition has no integral
  bool converged = true;
};

// K_r(t,s) from the spectral representation
//   K_r(t,s) = int_R (e^{itu}-1)/u (e^{-isu}-1)/u dm(u)
// for the even full-line measure whose fold onto (0,inf) is `measure`: the
// real form is integrated over (0,inf) with factor 2. The oscillation scale
// of each piece is passed down to the quadrature.
QuadratureResult spectral_kernel(const WeightedMeasure& measure, double t,
                                 double s, double tol = 1e-10);

// Gamma(1-H)/(2H) (|t|^{2H}+|s|^{2H}-|t-s|^{2H})
//   = int_0^inf (1-e^{-u^2 t^2})(1-e^{-u^2 s^2}) u^{-1-2H} du
//     + sum_{n>=1} 2^{n-1} Gamma(n-H)/n! t^n s^n / (t^2+s^2)^{n-H},
// valid for H in (0,1) and all real t, s.
SeriesResult fbm_decomposition_a(double hurst, double t, double s,
                                 const TruncationPolicy& policy = {});

// |t|^{2H}+|s|^{2H}-|t-s|^{2H}
//   = 2H K11(t,s) (|t|+|s|)^{2H-1}
//     + (2H/Gamma(1-2H)) { int_0^inf (1-e^{-u|t|})(1-e^{-u|s|}) u^{-1-2H} du
//                          + sum_{n>=2} K11^n Gamma(n-2H)/(n! (|t|+|s|)^{n-2H}) },
// valid for H in (0,1/2) strictly. K11(t,s) = |t|+|s|-|t-s|. The leading
// term carries the factor (|t|+|s|)^{2H-1}; it is the n=1 series term.
SeriesResult fbm_decomposition_b(double hurst, double t, double s,
                                 const TruncationPolicy& policy = {});

// phi(r(t)+r(s)) - phi(r(t-s)) = sum_{n>=1} K_r(t,s)^n/n! M(n, r(t)+r(s))
// with M(n,mu) = int u^n e^{-mu u} dm_phi(u).
SeriesResult bernstein_decomposition(const GeneratorFunction& r,
                                     const WeightedMeasure& phi_measure,
                                     double t, double s,
                                     const TruncationPolicy& policy = {});

// (r(t)+r(s))^alpha - r(t-s)^alpha with r(t)=|t|^{2H}:
//   alpha K_r(t,s) (r(t)+r(s))^{alpha-1}
//   + alpha/Gamma(1-alpha) sum_{n>=2} K_r^n Gamma(n-alpha)/(n! (r(t)+r(s))^{n-alpha}).
// alpha = 1 is admitted; the n>=2 sum is then exactly zero.
SeriesResult bifbm_decomposition(double hurst, double alpha, double t,
                                 double s, const TruncationPolicy& policy = {});

// K_r(t,s) for a generator with representing Bernstein measure dm:
//   K_r(t,s) = int (1-e^{-u|t|})(1-e^{-u|s|}) dm(u)
//              + sum_{n>=1} K11(t,s)^n/n! M(n, |t|+|s|).
SeriesResult krein_generator_decomposition(const WeightedMeasure& dm, double t,
                                           double s,
                                           const TruncationPolicy& policy = {});

enum class DecompositionMethod {
  Spectral,
  SchoenbergA,
  SchoenbergB,
  Bernstein,
  BiFbmSeries
};

struct CrossValidationReport {
  DecompositionMethod method;
  std::vector<double> grid;
  double max_rel_dev = 0.0;        // over off-diagonal pairs
  double argmax_t = 0.0;
  double argmax_s = 0.0;
  double diagonal_max_rel_dev = 0.0;
  std::vector<std::pair<double, double>> non_converged_pairs;
};

// Evaluates the decomposition and the closed form on grid x grid and reports
// the maximum relative deviation (diagonal pairs separately).
CrossValidationReport cross_validate(const KernelSpec& spec,
                                     DecompositionMethod method,
                                     std::span<const double> grid,
                                     const TruncationPolicy& policy = {});

// First `count` series terms (n = 1..count), for term-level identities.
std::vector<double> fbm_b_series_terms(double hurst, double t, double s,
                                       int count);
std::vector<double> generator_series_terms(const ExponentialMoments& moments,
                                           double k, double mu, int count);

}  // namespace kk
