#pragma once

#include <map>

#include "kernelkit/decompositions.hpp"
#include "kernelkit/kernels.hpp"

namespace kk::transforms {

// Context of the nonlinear transform psi: generator r, the Bernstein measure
// of phi, and the anchor t0 != 0.
struct TransformContext {
  GeneratorFunction r;
  WeightedMeasure phi_measure;
  double t0 = 1.0;

  TransformContext(GeneratorFunction r_, WeightedMeasure phi_measure_,
                   double t0_);
};

struct PsiPointResult {
  SeriesResult series;
  bool divergent = false;  // ratio test failed at this point
};

// psi(f)(t) = sum_{n>=1} M(n, r(t)+r(t0))/n! f(t)^n per point, where
// M(n,mu) = int u^n e^{-mu u} dm_phi(u). Divergent points are reported
// per-point; the remaining points are still returned.
std::map<double, PsiPointResult> psi_apply(const TransformContext& ctx,
                                           const std::map<double, double>& f_values,
                                           const TruncationPolicy& policy = {});

// Truncated right-hand side of the norm bound:
//   sum_{n>=1} M(n, 2 r(t0))/n! norm_f^{2n}.
SeriesResult psi_bound(const TransformContext& ctx, double norm_f,
                       const TruncationPolicy& policy = {});

struct FbmBoundConstant {
  SeriesResult series;        // sum_{n>=2} Gamma(n-2H)/(2^n n! (2 t0)^{n-2H})
  double prefactor = 0.0;     // (2H/Gamma(1-2H))^2 from the map definition
  double prefactored_value = 0.0;
};

// The fBm norm-bound constant; the series converges for t0 > 1/2 (enforced).
// The value is reported both as printed and with the squared map prefactor.
FbmBoundConstant fbm_bound_constant(double hurst, double t0,
                                    const TruncationPolicy& policy = {});

}  // namespace kk::transforms
