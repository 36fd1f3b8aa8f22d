#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kernelkit/kernels.hpp"

namespace kk::sampling {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
// Streams are pure functions of (key, counter), so path generation is
// reproducible across platforms and trivially parallel.
struct Philox4x32 {
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& counter,
                                       const std::array<uint32_t, 2>& key);
};

// Standard normal draws for one path: key = seed, counter = (path, block).
class NormalStream {
public:
  NormalStream(uint64_t seed, uint64_t path_index);
  double next();

private:
  void refill();
  std::array<uint32_t, 2> key_;
  uint64_t path_;
  uint64_t block_ = 0;
  double cache_[2];
  int avail_ = 0;
};

struct PathEnsemble {
  std::vector<double> grid;
  std::vector<double> paths;  // row-major, n_paths x grid.size()
  size_t n_paths = 0;
  uint64_t seed = 0;
  KernelSpec spec;
  double jitter_used = 0.0;      // epsilon of the jitter ladder that succeeded
  size_t factor_rank = 0;        // rank of the pivoted factor
  double reconstruction_error = 0.0;  // max|L L^T - Gram| before sampling

  double at(size_t path, size_t j) const { return paths[path * grid.size() + j]; }
};

// Pivoted Cholesky of a PSD matrix (row-major). Exactly-zero pivots below
// 1e-14*trace produce zero columns (degenerate coordinates such as t=0 are
// structural); negative pivots beyond that tolerance fail the attempt.
struct PivotedFactor {
  std::vector<double> l;  // row-major n x n, P applied: A ~ L L^T
  size_t n = 0;
  size_t rank = 0;
  bool ok = false;
};
PivotedFactor pivoted_cholesky(const std::vector<double>& a, size_t n);

// Zero-mean Gaussian vectors with covariance gram(spec, grid). Jitter ladder
// eps in {0, 1e-12, 1e-10, 1e-8} (times trace/n on the diagonal) escalates
// only when factorization fails; FactorizationFailed past the ladder.
PathEnsemble sample_paths(const KernelSpec& spec, std::span<const double> grid,
                          size_t n_paths, uint64_t seed);

struct CovarianceCheck {
  std::vector<double> covariance;  // row-major sample covariance, n-1 denom
  double max_standardized_deviation = 0.0;
};

// Sample covariance against the target Gram; standardized with the Gaussian
// fourth-moment variance (K_ii K_jj + K_ij^2)/n_paths.
CovarianceCheck empirical_covariance(const PathEnsemble& ensemble);

}  // namespace kk::sampling
