#pragma once

// Special functions: Jacobi polynomials, Bessel J of real order and its
// primitive, log-Gamma, Gauss-Jacobi rules, and the classical large-degree
// approximants of Jacobi polynomials.

#include <math.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace symrmt {

inline constexpr double pi = std::numbers::pi;

// Weight exponents (a, b) of (1-x)^a (1+x)^b together with the polynomial
// parameters (A, B) used by the kernel of symmetry class beta.
struct JacobiParams {
  double A = 0.0;
  double B = 0.0;
  double a = 0.0;
  double b = 0.0;
  int beta = 2;

  static JacobiParams unitary(double a, double b) { return {a, b, a, b, 2}; }
  static JacobiParams orthogonal(double a, double b) {
    return {2.0 * a + 1.0, 2.0 * b + 1.0, a, b, 1};
  }
  static JacobiParams symplectic(double a, double b) {
    return {a - 1.0, b - 1.0, a, b, 4};
  }
  static JacobiParams for_beta(int beta, double a, double b) {
    switch (beta) {
      case 1: return orthogonal(a, b);
      case 2: return unitary(a, b);
      case 4: return symplectic(a, b);
      default: throw std::invalid_argument("beta must be 1, 2 or 4");
    }
  }
};

// ---------------------------------------------------------------- Gamma

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// 1/Gamma(x), entire; zero at the poles of Gamma.
inline long double rgamma(long double x) {
  if (x <= 0.0L && x == std::floor(x)) return 0.0L;
  if (x > 1700.0L) return 0.0L;
  return 1.0L / std::tgamma(x);
}

// Generalized binomial coefficient t(t-1)...(t-k+1)/k!.
inline double binomial(double t, int k) {
  long double r = 1.0L;
  for (int j = 0; j < k; ++j) r *= (static_cast<long double>(t) - j) / (j + 1);
  return static_cast<double>(r);
}

// ---------------------------------------------------------------- Jacobi

namespace detail {

// Finite binomial sum; exact polynomial identity, used for small degree.
inline double jacobi_explicit(int n, double A, double B, double x) {
  const long double u = (static_cast<long double>(x) - 1.0L) / 2.0L;
  const long double v = (static_cast<long double>(x) + 1.0L) / 2.0L;
  long double s = 0.0L;
  for (int k = 0; k <= n; ++k) {
    s += static_cast<long double>(binomial(n + A, n - k)) * binomial(n + B, k) *
         std::pow(u, k) * std::pow(v, n - k);
  }
  return static_cast<double>(s);
}

}  // namespace detail

// (P_n, P_{n-1}); P_{-1} = 0.
inline std::pair<double, double> jacobi_poly_pair(int n, double A, double B, double x) {
  if (n < 0) throw std::invalid_argument("jacobi_poly: degree must be nonnegative");
  constexpr int small = 6;
  if (n <= small) {
    return {detail::jacobi_explicit(n, A, B, x),
            n == 0 ? 0.0 : detail::jacobi_explicit(n - 1, A, B, x)};
  }
  double pm2 = detail::jacobi_explicit(small - 1, A, B, x);
  double pm1 = detail::jacobi_explicit(small, A, B, x);
  for (int k = small + 1; k <= n; ++k) {
    const double s = 2.0 * k + A + B;
    const double d = 2.0 * k * (k + A + B) * (s - 2.0);
    if (std::abs(d) < 1e-300) {
      return {detail::jacobi_explicit(n, A, B, x), detail::jacobi_explicit(n - 1, A, B, x)};
    }
    const double p = ((s - 1.0) * (s * (s - 2.0) * x + A * A - B * B) * pm1 -
                      2.0 * (k + A - 1.0) * (k + B - 1.0) * s * pm2) / d;
    pm2 = pm1;
    pm1 = p;
  }
  return {pm1, pm2};
}

inline double jacobi_poly(int n, double A, double B, double x) {
  return jacobi_poly_pair(n, A, B, x).first;
}

// k-th x-derivative of P_n^{(A,B)}.
inline double jacobi_poly_deriv(int n, double A, double B, double x, int order = 1) {
  if (n < 0 || order < 0) throw std::invalid_argument("jacobi_poly_deriv: negative degree or order");
  if (order > n) return 0.0;
  double c = 1.0;
  for (int j = 0; j < order; ++j) c *= 0.5 * (n + A + B + 1.0 + j);
  return c * jacobi_poly(n - order, A + order, B + order, x);
}

// ---------------------------------------------------------------- Bessel

namespace detail {

inline bool is_integer(double v) { return v == std::floor(v); }

// Power series in extended precision.
inline double bessel_j_series(double nu, double z) {
  const long double h = static_cast<long double>(z) / 2.0L;
  const long double h2 = h * h;
  long double term = std::pow(h, static_cast<long double>(nu)) * rgamma(nu + 1.0L);
  long double sum = term;
  long double peak = std::abs(term);
  for (int k = 1; k < 500; ++k) {
    const long double d = k * (nu + k);
    term *= -h2 / d;
    sum += term;
    peak = std::max(peak, std::abs(term));
    if (k > h && std::abs(term) <= 1e-21L * peak) break;
  }
  return static_cast<double>(sum);
}

// Termwise primitive of the power series, nu > -1.
inline double bessel_j_primitive_series(double nu, double x) {
  const long double h = static_cast<long double>(x) / 2.0L;
  const long double h2 = h * h;
  // coefficient of (x/2)^{nu+2k+1}: (-1)^k 2 / ((nu+2k+1) k! Gamma(nu+k+1))
  long double c = std::pow(h, static_cast<long double>(nu) + 1.0L) * 2.0L * rgamma(nu + 1.0L);
  long double sum = c / (nu + 1.0L);
  long double peak = std::abs(sum);
  for (int k = 1; k < 500; ++k) {
    c *= -h2 / (k * (nu + k));
    const long double t = c / (nu + 2.0L * k + 1.0L);
    sum += t;
    peak = std::max(peak, std::abs(t));
    if (k > h && std::abs(t) <= 1e-21L * peak) break;
  }
  return static_cast<double>(sum);
}

// J_{mu+k}(z) for k = 0..size-1 by Miller's backward recurrence, normalized
// with (z/2)^mu = sum_k c_k J_{mu+2k}(z).  0 <= mu < 1, z > 0.  The returned
// array extends past kmax to the starting order so tail sums are available.
inline std::vector<double> bessel_j_miller(double mu, double z, int kmax) {
  const int start = std::max(kmax, static_cast<int>(z)) + 40 +
                    static_cast<int>(6.0 * std::cbrt(z));
  std::vector<double> f(start + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = 2.0 * (mu + k) / z * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > 1e250) {
      for (int j = k - 1; j <= start + 1; ++j) f[j] *= 1e-250;
    }
  }
  const double g = std::tgamma(mu + 1.0);
  long double norm = g * f[0];
  long double r = 1.0L;
  for (int k = 1; 2 * k <= start; ++k) {
    if (k > 1) r *= (mu + k - 1.0L) / k;
    norm += (mu + 2.0L * k) * g * r * f[2 * k];
  }
  const double scale = std::pow(z / 2.0, mu) / static_cast<double>(norm);
  f.resize(start + 1);
  for (double& v : f) v *= scale;
  return f;
}

inline bool bessel_use_series(double nu, double z) {
  return z <= 12.0 || (nu >= 0.0 && z * z / 4.0 <= nu + 1.0);
}

}  // namespace detail

inline double bessel_j(double nu, double z) {
  if (!(z >= 0.0)) throw std::domain_error("bessel_j: argument must be nonnegative");
  if (nu < 0.0 && detail::is_integer(nu)) {
    const double v = bessel_j(-nu, z);
    return (static_cast<long long>(-nu) % 2) ? -v : v;
  }
  if (z == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  if (detail::bessel_use_series(nu, z)) return detail::bessel_j_series(nu, z);
  const double fl = std::floor(nu);
  const double mu = nu - fl;
  const int n = static_cast<int>(fl);
  if (n >= 0) return detail::bessel_j_miller(mu, z, n)[n];
  const auto f = detail::bessel_j_miller(mu, z, 1);
  double jp1 = f[1], j = f[0];
  for (int k = 0; k > n; --k) {
    const double jm1 = 2.0 * (mu + k) / z * j - jp1;
    jp1 = j;
    j = jm1;
  }
  return j;
}

// Integral of J_nu over [0, x].  For nu <= -1 the divergent integral is
// replaced by its analytic continuation in nu, which satisfies
// P(nu, x) = 2 J_{nu+1}(x) + P(nu+2, x).
inline double bessel_j_primitive(double nu, double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_j_primitive: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (nu <= -1.0) return 2.0 * bessel_j(nu + 1.0, x) + bessel_j_primitive(nu + 2.0, x);
  if (x <= 12.0) return detail::bessel_j_primitive_series(nu, x);
  // 2 * sum_{k>=0} J_{nu+1+2k}(x)
  const double fl = std::floor(nu + 1.0);
  const double mu = nu + 1.0 - fl;
  const int n = static_cast<int>(fl);
  const auto f = detail::bessel_j_miller(mu, x, n);
  long double s = 0.0L;
  for (std::size_t k = n; k < f.size(); k += 2) s += f[k];
  return static_cast<double>(2.0L * s);
}

// ---------------------------------------------------------------- quadrature

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha = 0.0;
  double beta = 0.0;

  // Sum of w_i f(t_i): approximates the integral of f against
  // (1-t)^alpha (1+t)^beta over [-1, 1].
  template <class F>
  double apply(F&& f) const {
    long double s = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return static_cast<double>(s);
  }
};

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix; weights come
// from the orthonormal polynomials at the nodes, w_i = 1 / sum_k p_k(t_i)^2.
inline QuadratureRule gauss_jacobi_rule(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi_rule: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw std::invalid_argument("gauss_jacobi_rule: exponents must exceed -1");
  }
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  std::vector<double> bk(n, 0.0);
  diag(0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    bk[k] = std::sqrt(b2);
    sub(k - 1) = bk[k];
  }
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + log_gamma(alpha + 1.0) +
                         log_gamma(beta + 1.0) - log_gamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  for (int i = 0; i < n; ++i) {
    const double t = es.eigenvalues()(i);
    long double p_prev = 0.0L, p = 1.0L / std::sqrt(static_cast<long double>(mu0));
    long double sum = p * p;
    for (int k = 0; k + 1 < n; ++k) {
      const long double next = ((t - diag(k)) * p - (k > 0 ? bk[k] * p_prev : 0.0L)) / bk[k + 1];
      p_prev = p;
      p = next;
      sum += p * p;
    }
    rule.nodes[i] = t;
    rule.weights[i] = static_cast<double>(1.0L / sum);
  }
  return rule;
}

// Memoized rules; safe for concurrent use.
inline std::shared_ptr<const QuadratureRule> cached_gauss_jacobi(int n, double alpha, double beta) {
  using Key = std::tuple<int, double, double>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const QuadratureRule>> cache;
  const Key key{n, alpha, beta};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi_rule(n, alpha, beta));
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

// Fixed 20-point Gauss-Legendre on [lo, hi].
template <class F>
double integrate_gl(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
}

// Adaptive Gauss-Kronrod on [lo, hi] after splitting into panels no wider
// than max_width; each panel is bisected at most max_depth times.
template <class F>
double integrate_panels(F&& f, double lo, double hi, double max_width, double tol = 1e-11, unsigned max_depth = 8) {
  if (lo == hi) return 0.0;
  const double len = hi - lo;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(len) / max_width)));
  const double h = len / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double b = (p + 1 == panels) ? hi : a + h;
    s += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth, tol);
  }
  return s;
}

// ---------------------------------------------------------------- sine integral

inline double sine_integral(double z) {
  if (z < 0.0) return -sine_integral(-z);
  if (z <= 4.0) {
    const long double zz = z;
    long double term = zz, sum = zz;
    for (int k = 1; k < 60; ++k) {
      term *= -zz * zz / ((2.0L * k) * (2.0L * k + 1.0L));
      const long double t = term / (2.0L * k + 1.0L);
      sum += t;
      if (std::abs(t) < 1e-22L) break;
    }
    return static_cast<double>(sum);
  }
  if (z <= 40.0) {
    auto sinc = [](double t) { return std::sin(t) / t; };
    return sine_integral(4.0) + integrate_panels(sinc, 4.0, z, 1.0, 1e-15);
  }
  // Asymptotic auxiliary functions: Si = pi/2 - f cos z - g sin z.
  long double f = 0.0L, g = 0.0L, tf = 1.0L / z, tg = 1.0L / (static_cast<long double>(z) * z);
  for (int k = 0; k < 30; ++k) {
    f += tf;
    g += tg;
    const long double nf = -tf * (2.0L * k + 1.0L) * (2.0L * k + 2.0L) / (static_cast<long double>(z) * z);
    const long double ng = -tg * (2.0L * k + 2.0L) * (2.0L * k + 3.0L) / (static_cast<long double>(z) * z);
    if (std::abs(nf) > std::abs(tf) || std::abs(nf) < 1e-20L) break;
    tf = nf;
    tg = ng;
  }
  return pi / 2.0 - static_cast<double>(f) * std::cos(z) - static_cast<double>(g) * std::sin(z);
}

// ---------------------------------------------------------------- approximants

// Main term of Darboux's formula for P_N^{(A,B)}(cos theta).
inline double darboux_approx(int N, double A, double B, double theta) {
  if (!(theta > 0.0 && theta < pi)) throw std::domain_error("darboux_approx: theta must lie in (0, pi)");
  const double np = N + (A + B + 1.0) / 2.0;
  const double gamma = -(A + 0.5) * pi / 2.0;
  return std::pow(pi * N, -0.5) * std::pow(std::sin(theta / 2.0), -A - 0.5) *
         std::pow(std::cos(theta / 2.0), -B - 0.5) * std::cos(np * theta + gamma);
}

// Main term of Hilb's formula: approximates
// (sin theta/2)^A (cos theta/2)^B P_N^{(A,B)}(cos theta), A > -1.
inline double hilb_approx(int N, double A, double B, double theta) {
  if (!(A > -1.0)) throw std::domain_error("hilb_approx: requires A > -1");
  if (!(theta > 0.0 && theta < pi)) throw std::domain_error("hilb_approx: theta must lie in (0, pi)");
  const double np = N + (A + B + 1.0) / 2.0;
  const double pref = std::exp(-A * std::log(static_cast<double>(N)) + log_gamma(N + A + 1.0) -
                               log_gamma(N + 1.0));
  return pref * std::sqrt(theta / std::sin(theta)) * bessel_j(A, np * theta);
}

// Main term of the all-A variant: approximates P_N^{(A,B)}(cos theta).
inline double hilb2_approx(int N, double A, double B, double theta) {
  if (!(theta > 0.0 && theta < pi)) throw std::domain_error("hilb2_approx: theta must lie in (0, pi)");
  const double np = N + (A + B + 1.0) / 2.0;
  return std::pow(std::sin(theta / 2.0), -A) * std::pow(std::cos(theta / 2.0), -B) *
         std::sqrt(theta / std::sin(theta)) * bessel_j(A, np * theta);
}

}  // namespace symrmt
