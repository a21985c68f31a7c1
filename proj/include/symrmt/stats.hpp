#pragma once

// Empirical statistics: histograms, Kolmogorov-Smirnov distances, local
// rescaling of eigenangles, pair correlations of rescaled levels, and
// convergence reports of finite kernels towards their limits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernels_finite.hpp"
#include "kernels_limit.hpp"
#include "qdet.hpp"
#include "specfun.hpp"

namespace symrmt {

struct StatReport {
  std::string test_name;
  std::string metric;  // which of the fields below is gated
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t sample_count = 0;
  std::size_t bins = 0;
  double ks_distance = std::numeric_limits<double>::quiet_NaN();
  double max_abs_error = std::numeric_limits<double>::quiet_NaN();
  double l2_error = std::numeric_limits<double>::quiet_NaN();

  // pass iff value <= tolerance
  static StatReport gate(std::string name, std::string metric, double value, double tolerance) {
    StatReport r;
    r.test_name = std::move(name);
    r.metric = std::move(metric);
    r.value = value;
    r.tolerance = tolerance;
    r.pass = value <= tolerance;
    return r;
  }
};

// ---------------------------------------------------------------- histograms

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;
  std::vector<double> density;  // integrates to 1 over [lo, hi]
  std::size_t total = 0;        // samples inside [lo, hi]

  std::size_t bins() const { return counts.size(); }
  double width() const { return (hi - lo) / static_cast<double>(bins()); }
  double left(std::size_t i) const { return lo + width() * static_cast<double>(i); }
  double right(std::size_t i) const { return lo + width() * static_cast<double>(i + 1); }
  double center(std::size_t i) const { return lo + width() * (static_cast<double>(i) + 0.5); }
};

// Normalized histogram of the samples in [lo, hi]; the top edge is closed.
inline Histogram empirical_density(const std::vector<double>& samples, std::size_t bins, double lo, double hi) {
  if (samples.empty()) throw std::invalid_argument("empirical_density: no samples");
  if (bins < 2) throw std::invalid_argument("empirical_density: need at least 2 bins");
  if (!(hi > lo)) throw std::invalid_argument("empirical_density: empty range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (double s : samples) {
    if (!(s >= lo && s <= hi)) continue;
    auto i = static_cast<std::size_t>((s - lo) / w);
    h.counts[std::min(i, bins - 1)]++;
    h.total++;
  }
  if (h.total == 0) throw std::invalid_argument("empirical_density: no samples inside the range");
  h.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.density[i] = static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * w);
  return h;
}

// Range taken from the data; a constant sample is centered in a unit range.
inline Histogram empirical_density(const std::vector<double>& samples, std::size_t bins) {
  if (samples.empty()) throw std::invalid_argument("empirical_density: no samples");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (*mn == *mx) return empirical_density(samples, bins, *mn - 0.5, *mx + 0.5);
  return empirical_density(samples, bins, *mn, *mx);
}

// ---------------------------------------------------------------- KS distances

// sup |F_n - F| for a continuous reference cdf F.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

// Two-sample distance sup |F_n - G_m|.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double uniform_cdf(double lo, double hi, double x) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); }

// cdf of the arcsine law 1/(pi sqrt(1 - x^2)) on [-1, 1]
inline double arcsine_cdf(double x) { return 1.0 - std::acos(std::clamp(x, -1.0, 1.0)) / pi; }

// Normalized cdf on [lo, hi] of a density given on a grid (trapezoid rule).
class TabulatedCdf {
 public:
  TabulatedCdf(const std::function<double(double)>& density, double lo, double hi, std::size_t n = 2000)
      : lo_(lo), hi_(hi), cum_(n + 1, 0.0) {
    const double h = (hi - lo) / static_cast<double>(n);
    double prev = density(lo);
    for (std::size_t i = 1; i <= n; ++i) {
      const double cur = density(lo + h * static_cast<double>(i));
      cum_[i] = cum_[i - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    for (double& c : cum_) c /= cum_.back();
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const double u = (x - lo_) / (hi_ - lo_) * static_cast<double>(cum_.size() - 1);
    const auto i = static_cast<std::size_t>(u);
    const double f = u - static_cast<double>(i);
    return cum_[i] + f * (cum_[i + 1] - cum_[i]);
  }

 private:
  double lo_, hi_;
  std::vector<double> cum_;
};

// ---------------------------------------------------------------- local rescaling

// xi such that x = cos(alpha_o + pi xi / R) in the bulk, x = cos(pi xi / R)
// at +1 and x = -cos(pi xi / R) at -1.
inline std::vector<double> rescale_levels(const std::vector<double>& thetas, Regime regime, double z_o, int R) {
  if (R < 1) throw std::invalid_argument("rescale_levels: R must be positive");
  std::vector<double> xi;
  xi.reserve(thetas.size());
  const double s = static_cast<double>(R) / pi;
  switch (regime) {
    case Regime::bulk: {
      if (!(std::abs(z_o) < 1.0)) throw std::domain_error("rescale_levels: bulk needs |z_o| < 1");
      const double alpha = std::acos(z_o);
      for (double t : thetas) xi.push_back((t - alpha) * s);
      break;
    }
    case Regime::hard_edge_plus:
      if (z_o != 1.0) throw std::domain_error("rescale_levels: the +1 edge needs z_o = 1");
      for (double t : thetas) xi.push_back(t * s);
      break;
    case Regime::hard_edge_minus:
      if (z_o != -1.0) throw std::domain_error("rescale_levels: the -1 edge needs z_o = -1");
      for (double t : thetas) xi.push_back((pi - t) * s);
      break;
  }
  return xi;
}

// The local map as a change of variables for rescale_*_kernel.
inline ChangeOfVariables local_change_of_variables(Regime regime, double z_o, int R) {
  if (R < 1) throw std::invalid_argument("local_change_of_variables: R must be positive");
  const double k = pi / static_cast<double>(R);
  double alpha = 0.0;
  double sign = 1.0;
  switch (regime) {
    case Regime::bulk:
      if (!(std::abs(z_o) < 1.0)) throw std::domain_error("local_change_of_variables: bulk needs |z_o| < 1");
      alpha = std::acos(z_o);
      break;
    case Regime::hard_edge_plus:
      break;
    case Regime::hard_edge_minus:
      sign = -1.0;
      break;
  }
  return {[=](double u) { return sign * std::cos(alpha + k * u); },
          [=](double u) { return -sign * k * std::sin(alpha + k * u); }};
}

// ---------------------------------------------------------------- pair correlation

struct PairCorrelation {
  std::vector<double> r;  // bin centers
  std::vector<double> g;  // estimate, -> 1 at large r
  double density = 0.0;   // mean levels per unit length in the window
  std::size_t centers = 0;
};

// Two-level correlation of rescaled levels: ordered pairs (i, j) with xi_i in
// [-window, window] and |xi_j - xi_i| in each bin of [0, r_max], divided by
// the count expected for independent levels of the same mean density.
inline PairCorrelation pair_correlation_estimate(const std::vector<std::vector<double>>& draws, double window,
                                                 std::size_t bins, double r_max) {
  if (draws.size() < 100) throw std::invalid_argument("pair_correlation_estimate: need at least 100 draws");
  if (bins < 1 || !(r_max > 0.0) || !(window > 0.0)) {
    throw std::invalid_argument("pair_correlation_estimate: bad window or bins");
  }
  const double dr = r_max / static_cast<double>(bins);
  std::vector<double> counts(bins, 0.0);
  PairCorrelation pc;
  for (const auto& d : draws) {
    std::vector<double> xs(d);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] < -window || xs[i] > window) continue;
      pc.centers++;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == i) continue;
        const double sep = std::abs(xs[j] - xs[i]);
        if (sep >= r_max) continue;
        counts[static_cast<std::size_t>(sep / dr)] += 1.0;
      }
    }
  }
  if (pc.centers == 0) throw std::invalid_argument("pair_correlation_estimate: no levels in the window");
  pc.density = static_cast<double>(pc.centers) / (static_cast<double>(draws.size()) * 2.0 * window);
  pc.r.resize(bins);
  pc.g.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    pc.r[k] = (static_cast<double>(k) + 0.5) * dr;
    pc.g[k] = counts[k] / (static_cast<double>(pc.centers) * 2.0 * dr * pc.density);
  }
  return pc;
}

// ---------------------------------------------------------------- convergence

// Finite kernel in local variables at rank R, and its limit.
using FiniteLocalKernel = std::function<double(int R, double xi, double eta)>;
using LocalKernel = std::function<double(double xi, double eta)>;

struct ConvergenceReport {
  std::vector<int> ranks;
  std::vector<StatReport> reports;  // one per rank: max and L2 errors over the grid
  bool monotone = false;            // max error decreasing in R
};

// beta 2: the CD kernel rescaled by the local map; beta 1, 4: the S entry of
// the rescaled matrix kernel, S(x(xi), x(eta)) |x'(eta)|.  The eps/delta
// factor depends on xi only and is cached per (R, xi).
inline FiniteLocalKernel local_finite_kernel(int beta, double a, double b, Regime regime, double z_o) {
  if (beta == 2) {
    return [=](int R, double xi, double eta) {
      return rescale_scalar_kernel(finite_scalar_kernel(R, a, b), local_change_of_variables(regime, z_o, R))(xi, eta);
    };
  }
  if (beta != 1 && beta != 4) throw std::invalid_argument("local_finite_kernel: beta must be 1, 2 or 4");
  struct Cache {
    std::mutex mu;
    std::map<int, std::shared_ptr<SummationKernel>> kernels;
    std::map<std::pair<int, double>, double> xterms;
  };
  auto cache = std::make_shared<Cache>();
  return [=](int R, double xi, double eta) {
    const ChangeOfVariables X = local_change_of_variables(regime, z_o, R);
    std::shared_ptr<SummationKernel> k;
    double xt = 0.0;
    bool have = false;
    const double x = X.map(xi);
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto& slot = cache->kernels[R];
      if (!slot) slot = std::make_shared<SummationKernel>(beta, R, a, b);
      k = slot;
      auto it = cache->xterms.find({R, xi});
      if (it != cache->xterms.end()) {
        xt = it->second;
        have = true;
      }
    }
    if (!have) {
      xt = k->x_term(x);
      std::lock_guard<std::mutex> lock(cache->mu);
      cache->xterms[{R, xi}] = xt;
    }
    return k->S(x, X.map(eta), xt) * std::abs(X.deriv(eta));
  };
}

// Limit of local_finite_kernel: sine kernels in the bulk, Bessel kernels at
// the edges (exponent b at -1).
inline LocalKernel local_limit_kernel(int beta, double a, double b, Regime regime) {
  const LimitKernelSpec spec{beta, regime, a, b};
  if (beta == 2) return limit_scalar_kernel(spec);
  if (beta != 1 && beta != 4) throw std::invalid_argument("local_limit_kernel: beta must be 1, 2 or 4");
  if (regime == Regime::bulk) return [beta](double x, double y) { return sine_matrix(beta, x, y).S; };
  const BesselMatrixKernel k(beta, regime == Regime::hard_edge_plus ? a : b);
  return [k](double x, double y) { return k.S(x, y); };
}

inline ConvergenceReport convergence_report(const std::string& name, const FiniteLocalKernel& finite,
                                            const LocalKernel& limit, const std::vector<double>& grid,
                                            const std::vector<int>& ranks, double tolerance) {
  ConvergenceReport out;
  out.ranks = ranks;
  std::vector<double> ref(grid.size() * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) ref[i * grid.size() + j] = limit(grid[i], grid[j]);
  for (int R : ranks) {
    double mx = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double e = std::abs(finite(R, grid[i], grid[j]) - ref[i * grid.size() + j]);
        mx = std::max(mx, e);
        sq += e * e;
      }
    StatReport r = StatReport::gate(name + " R=" + std::to_string(R), "max_abs_error", mx, tolerance);
    r.sample_count = grid.size() * grid.size();
    r.max_abs_error = mx;
    r.l2_error = std::sqrt(sq / static_cast<double>(r.sample_count));
    out.reports.push_back(r);
  }
  out.monotone = true;
  for (std::size_t k = 1; k < out.reports.size(); ++k)
    if (out.reports[k].max_abs_error >= out.reports[k - 1].max_abs_error) out.monotone = false;
  return out;
}

}  // namespace symrmt
