#include "kernelkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "kernelkit/errors.hpp"

namespace kk::quad {

namespace {

GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

struct Panel {
  double a, b;
  double value;   // refined (two-half) estimate
  double error;
};

Panel make_panel(const Integrand& f, double a, double b) {
  double mid = 0.5 * (a + b);
  double whole = gl_panel(f, a, b);
  double halves = gl_panel(f, a, mid) + gl_panel(f, mid, b);
  return Panel{a, b, halves, std::abs(whole - halves)};
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

double gl_panel(const Integrand& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  KahanSum acc;
  for (int i = 0; i < n; ++i) acc.add(rule.weights[i] * f(c + h * rule.nodes[i]));
  return h * acc.value();
}

Result integrate_interval(const Integrand& f, double a, double b,
                          const Options& opts) {
  Result res;
  if (!(b > a)) return res;

  // Seed panels, honoring the width cap before any error control.
  std::vector<Panel> panels;
  int nseed = 1;
  if (std::isfinite(opts.max_width) && opts.max_width > 0.0)
    nseed = std::max(1, (int)std::ceil((b - a) / opts.max_width));
  nseed = std::min(nseed, opts.max_panels);
  for (int i = 0; i < nseed; ++i) {
    double pa = a + (b - a) * i / nseed;
    double pb = a + (b - a) * (i + 1) / nseed;
    panels.push_back(make_panel(f, pa, pb));
  }

  auto total = [&panels]() {
    KahanSum v, e;
    for (const Panel& p : panels) {
      v.add(p.value);
      e.add(p.error);
    }
    return std::pair<double, double>(v.value(), e.value());
  };

  auto [value, err] = total();
  while ((int)panels.size() < opts.max_panels) {
    double target =
        std::max(opts.rel_tol * std::abs(value), opts.abs_floor);
    if (err <= target || err == 0.0) break;
    // Split the worst panel.
    size_t worst = 0;
    for (size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;
    Panel p = panels[worst];
    double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // width at rounding limit
    panels[worst] = make_panel(f, p.a, mid);
    panels.push_back(make_panel(f, mid, p.b));
    std::tie(value, err) = total();
  }

  // Deterministic final reduction: sum in interval order.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  KahanSum v, e;
  for (const Panel& p : panels) {
    v.add(p.value);
    e.add(p.error);
  }
  res.value = v.value();
  res.abs_error = e.value();
  res.panels = (int)panels.size();
  res.converged =
      res.abs_error <=
      std::max(opts.rel_tol * std::abs(res.value), opts.abs_floor) * 1.0001 + 0.0;
  return res;
}

int softening_exponent(double sigma) {
  if (sigma <= -1.0) return 8;  // integrand must supply the missing powers
  int k = (int)std::ceil(3.0 / (1.0 + sigma));
  return std::clamp(k, 1, 12);
}

Result integrate_power_endpoint(const Integrand& f, double b, double sigma,
                                const Options& opts) {
  const int k = softening_exponent(sigma);
  if (k == 1) return integrate_interval(f, 0.0, b, opts);
  const double broot = std::pow(b, 1.0 / k);
  auto g = [&f, k](double v) {
    double u = std::pow(v, k);
    double fv = f(u);
    if (fv == 0.0) return 0.0;
    return fv * k * std::pow(v, k - 1);
  };
  return integrate_interval(g, 0.0, broot, opts);
}

double richardson_known_exponent(const std::vector<double>& n,
                                 const std::vector<double>& s, double theta0,
                                 int levels, double* err_estimate) {
  std::vector<double> x = n, t = s;
  double prev = t.back();
  double est = std::numeric_limits<double>::infinity();
  for (int m = 0; m < levels && t.size() >= 2; ++m) {
    double theta = theta0 + m;
    std::vector<double> next(t.size() - 1);
    for (size_t i = 0; i + 1 < t.size(); ++i) {
      double r = std::pow(x[i + 1] / x[i], theta);
      next[i] = (r * t[i + 1] - t[i]) / (r - 1.0);
    }
    t = std::move(next);
    x.erase(x.begin());
    est = std::abs(t.back() - prev);
    prev = t.back();
  }
  if (err_estimate) *err_estimate = est;
  return prev;
}

double shanks(const std::vector<double>& s, double* err_estimate) {
  // Wynn epsilon table; returns the deepest stable even column.
  const size_t m = s.size();
  if (m < 3) {
    if (err_estimate)
      *err_estimate = m >= 2 ? std::abs(s[m - 1] - s[m - 2])
                             : std::numeric_limits<double>::infinity();
    return s.empty() ? 0.0 : s.back();
  }
  std::vector<double> prev(m, 0.0);  // eps_{-1}
  std::vector<double> cur(s);        // eps_0
  double best = s.back();
  double best_err = std::abs(s[m - 1] - s[m - 2]);
  for (size_t k = 1; k + 1 <= m; ++k) {
    std::vector<double> next;
    next.reserve(m - k);
    bool stalled = false;
    for (size_t j = 0; j + k < m; ++j) {
      double d = cur[j + 1] - cur[j];
      if (d == 0.0 || !std::isfinite(d)) {
        stalled = true;
        break;
      }
      next.push_back(prev[j + 1] + 1.0 / d);
    }
    if (k % 2 == 0 && !next.empty() && std::isfinite(next.back())) {
      // Error proxy: movement within the even column (or against the
      // current best when the column has a single entry).
      double cand = next.back();
      double err = next.size() >= 2
                       ? std::abs(next[next.size() - 1] - next[next.size() - 2])
                       : std::abs(cand - best);
      if (err < best_err) {
        best_err = err;
        best = cand;
      }
    }
    if (stalled) {
      // A vanishing difference in an odd column means the preceding even
      // column hit the limit exactly.
      if (k % 2 == 1 && !cur.empty()) {
        best = cur.back();
        best_err = 0.0;
      }
      break;
    }
    if (next.size() < 2 || best_err <= 1e-15 * std::abs(best)) break;
    prev = std::move(cur);
    cur = std::move(next);
  }
  if (err_estimate) *err_estimate = best_err;
  return best;
}

Result oscillatory_tail(const Integrand& f, double from, double freq,
                        double theta0, const Options& opts) {
  Result res;
  if (freq <= 0.0) throw DomainError("oscillatory_tail: freq must be > 0");
  const double half = std::numbers::pi / freq;
  const int max_blocks = std::max(8, opts.max_panels / 4);

  std::vector<double> partial;  // S_J after J full-period blocks
  std::vector<double> cut;      // matching truncation points U_J
  partial.reserve(max_blocks);
  cut.reserve(max_blocks);
  KahanSum acc;
  double u = from;
  int tiny_run = 0;
  double last_block = 0.0;

  // The remainder behaves like C * U_J^{-theta0} (1 + c1/U_J + ...) at the
  // full-period cuts U_J, so Richardson runs against U_J, sampled with
  // geometric spacing.
  auto extrapolate = [&](int levels, double* err) {
    int j = (int)partial.size() - 1;
    std::vector<double> xs, ss;
    for (int k = levels + 1; k >= 0; --k) {
      int idx = (int)std::llround((j + 1) / std::pow(2.0, 0.5 * k)) - 1;
      if (idx < 0) idx = 0;
      if (!xs.empty() && cut[idx] <= xs.back()) continue;
      xs.push_back(cut[idx]);
      ss.push_back(partial[idx]);
    }
    if (xs.size() < 3) {
      *err = std::numeric_limits<double>::infinity();
      return partial.back();
    }
    return richardson_known_exponent(xs, ss, theta0,
                                     std::min<int>(levels, (int)xs.size() - 1),
                                     err);
  };

  for (int j = 0; j < max_blocks; ++j) {
    double b1 = gl_panel(f, u, u + half);
    double b2 = gl_panel(f, u + half, u + 2.0 * half);
    u += 2.0 * half;
    last_block = b1 + b2;
    acc.add(last_block);
    partial.push_back(acc.value());
    cut.push_back(u);
    res.panels += 2;

    double scale = std::max(std::abs(acc.value()), opts.abs_floor);
    if (std::abs(last_block) <= opts.rel_tol * scale * 1e-2) {
      if (++tiny_run >= 2) {  // exponential-cutoff detection
        res.value = acc.value();
        res.abs_error = std::abs(last_block);
        res.converged = true;
        return res;
      }
    } else {
      tiny_run = 0;
    }

    if (theta0 > 0.0 && j >= 15 && (j % 4 == 3)) {
      double err = 0.0;
      double ext = extrapolate(4, &err);
      double target = std::max(opts.rel_tol * std::abs(ext), opts.abs_floor);
      if (std::isfinite(ext) && err <= target) {
        res.value = ext;
        res.abs_error = err;
        res.converged = true;
        return res;
      }
    }
  }

  // Budget exhausted: best estimate, honestly flagged.
  if (theta0 > 0.0) {
    double err = 0.0;
    double ext = extrapolate(4, &err);
    if (std::isfinite(ext)) {
      res.value = ext;
      res.abs_error = err;
      res.converged =
          err <= std::max(opts.rel_tol * std::abs(ext), opts.abs_floor);
      return res;
    }
  }
  res.value = acc.value();
  res.abs_error = std::abs(last_block) * (double)partial.size();
  res.converged = false;
  return res;
}

}  // namespace kk::quad
