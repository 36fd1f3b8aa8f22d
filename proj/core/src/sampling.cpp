#include "kernelkit/sampling.hpp"

#include <cmath>
#include <numbers>

#include "kernelkit/errors.hpp"

namespace kk::sampling {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<uint32_t, 4>& c,
                         const std::array<uint32_t, 2>& k) {
  uint64_t p0 = (uint64_t)kPhiloxM0 * c[0];
  uint64_t p1 = (uint64_t)kPhiloxM1 * c[2];
  uint32_t hi0 = (uint32_t)(p0 >> 32), lo0 = (uint32_t)p0;
  uint32_t hi1 = (uint32_t)(p1 >> 32), lo1 = (uint32_t)p1;
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline double to_unit(uint32_t hi, uint32_t lo) {
  uint64_t bits = ((uint64_t)hi << 32) | lo;
  // 53-bit mantissa in (0,1]; never exactly 0 so log() below is safe.
  return ((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(
    const std::array<uint32_t, 4>& counter,
    const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> c = counter;
  std::array<uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    philox_round(c, k);
  }
  return c;
}

NormalStream::NormalStream(uint64_t seed, uint64_t path_index)
    : key_{(uint32_t)seed, (uint32_t)(seed >> 32)}, path_(path_index) {}

void NormalStream::refill() {
  std::array<uint32_t, 4> ctr = {(uint32_t)path_, (uint32_t)(path_ >> 32),
                                 (uint32_t)block_, (uint32_t)(block_ >> 32)};
  ++block_;
  std::array<uint32_t, 4> out = Philox4x32::block(ctr, key_);
  double u1 = to_unit(out[0], out[1]);
  double u2 = to_unit(out[2], out[3]);
  double r = std::sqrt(-2.0 * std::log(u1));
  cache_[0] = r * std::cos(2.0 * std::numbers::pi * u2);
  cache_[1] = r * std::sin(2.0 * std::numbers::pi * u2);
  avail_ = 2;
}

double NormalStream::next() {
  if (avail_ == 0) refill();
  return cache_[2 - avail_--];
}

PivotedFactor pivoted_cholesky(const std::vector<double>& a, size_t n) {
  PivotedFactor f;
  f.n = n;
  if (a.size() != n * n) throw DomainError("pivoted_cholesky: shape mismatch");

  std::vector<double> work = a;
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<double> lp(n * n, 0.0);  // factor in pivoted order

  double trace = 0.0;
  for (size_t i = 0; i < n; ++i) trace += a[i * n + i];
  const double zero_tol = 1e-14 * std::max(trace, 0.0);

  auto w = [&](size_t i, size_t j) -> double& {
    return work[perm[i] * n + perm[j]];
  };

  size_t rank = 0;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    for (size_t i = k + 1; i < n; ++i)
      if (w(i, i) > w(piv, piv)) piv = i;
    std::swap(perm[k], perm[piv]);
    for (size_t i = 0; i < n; ++i) std::swap(lp[k * n + i], lp[piv * n + i]);

    double d = w(k, k);
    if (d <= zero_tol) {
      if (d < -zero_tol) return f;  // indefinite beyond tolerance
      // Structural zero pivot (e.g. K(0,0)=0): zero column, but the
      // remaining off-diagonal residual must vanish with it.
      for (size_t i = k; i < n; ++i)
        if (std::abs(w(i, k)) > 1e3 * zero_tol + 1e-300) return f;
      continue;
    }
    double root = std::sqrt(d);
    lp[k * n + rank] = root;
    for (size_t i = k + 1; i < n; ++i) lp[i * n + rank] = w(i, k) / root;
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j <= i; ++j) {
        double upd = w(i, j) - lp[i * n + rank] * lp[j * n + rank];
        w(i, j) = upd;
        w(j, i) = upd;
      }
    ++rank;
  }

  // Undo the permutation: rows of L back in original order.
  f.l.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) f.l[perm[i] * n + j] = lp[i * n + j];
  f.rank = rank;
  f.ok = true;
  return f;
}

PathEnsemble sample_paths(const KernelSpec& spec, std::span<const double> grid,
                          size_t n_paths, uint64_t seed) {
  GramMatrix g = gram(spec, grid);
  const size_t n = g.size();
  double trace = 0.0;
  for (size_t i = 0; i < n; ++i) trace += g(i, i);

  PivotedFactor factor;
  double jitter = 0.0;
  for (double eps : {0.0, 1e-12, 1e-10, 1e-8}) {
    std::vector<double> a = g.entries();
    jitter = eps * trace / (double)n;
    for (size_t i = 0; i < n; ++i) a[i * n + i] += jitter;
    factor = pivoted_cholesky(a, n);
    if (factor.ok) break;
  }
  if (!factor.ok)
    throw FactorizationFailed(
        "gram factorization failed after the jitter ladder");

  PathEnsemble e;
  e.grid.assign(grid.begin(), grid.end());
  e.n_paths = n_paths;
  e.seed = seed;
  e.spec = spec;
  e.jitter_used = jitter;
  e.factor_rank = factor.rank;

  double recon = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (size_t k = 0; k < n; ++k)
        v += factor.l[i * n + k] * factor.l[j * n + k];
      recon = std::max(recon, std::abs(v - (g(i, j) + (i == j ? jitter : 0.0))));
    }
  e.reconstruction_error = recon;

  e.paths.assign(n_paths * n, 0.0);
  std::vector<double> z(factor.rank);
  for (size_t p = 0; p < n_paths; ++p) {
    NormalStream stream(seed, p);
    for (size_t k = 0; k < factor.rank; ++k) z[k] = stream.next();
    for (size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (size_t k = 0; k < factor.rank; ++k)
        v += factor.l[i * n + k] * z[k];
      e.paths[p * n + i] = v;
    }
  }
  return e;
}

CovarianceCheck empirical_covariance(const PathEnsemble& e) {
  if (e.n_paths < 2)
    throw InsufficientPaths("empirical covariance needs at least 2 paths");
  const size_t n = e.grid.size();
  const size_t m = e.n_paths;

  std::vector<double> mean(n, 0.0);
  for (size_t p = 0; p < m; ++p)
    for (size_t i = 0; i < n; ++i) mean[i] += e.at(p, i);
  for (double& v : mean) v /= (double)m;

  CovarianceCheck res;
  res.covariance.assign(n * n, 0.0);
  for (size_t p = 0; p < m; ++p)
    for (size_t i = 0; i < n; ++i) {
      double di = e.at(p, i) - mean[i];
      for (size_t j = 0; j <= i; ++j)
        res.covariance[i * n + j] += di * (e.at(p, j) - mean[j]);
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= i; ++j) {
      double v = res.covariance[i * n + j] / (double)(m - 1);
      res.covariance[i * n + j] = v;
      res.covariance[j * n + i] = v;
    }

  GramMatrix g = gram(e.spec, e.grid);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= i; ++j) {
      double var = (g(i, i) * g(j, j) + g(i, j) * g(i, j)) / (double)m;
      double dev = res.covariance[i * n + j] - g(i, j);
      double z = var > 0.0 ? std::abs(dev) / std::sqrt(var)
                           : (dev == 0.0 ? 0.0
                                         : std::numeric_limits<double>::infinity());
      res.max_standardized_deviation =
          std::max(res.max_standardized_deviation, z);
    }
  return res;
}

}  // namespace kk::sampling
