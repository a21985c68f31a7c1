#pragma once

// Limiting local kernels: the arcsine global density, the sine kernels of
// the bulk and the Bessel kernels of the hard edges, scalar and 2x2.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernel_block.hpp"
#include "specfun.hpp"

namespace symrmt {

inline double global_density(double x) {
  if (!(std::abs(x) < 1.0)) throw std::domain_error("global_density: |x| must be below 1");
  return 1.0 / (pi * std::sqrt(1.0 - x * x));
}

// ---------------------------------------------------------------- sine

namespace detail {

// sin(u)/u and its derivative, with series near 0.
inline double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

inline double sinc_prime(double u) {
  if (std::abs(u) < 1e-3) return -u / 3.0 + u * u * u / 30.0;
  return (u * std::cos(u) - std::sin(u)) / (u * u);
}

}  // namespace detail

inline double sine_scalar(double xi, double eta) { return detail::sinc(pi * (xi - eta)); }

// beta 4: S(xi, eta) = K(2 xi, 2 eta); beta 1: S = K, with the step term in
// the I slot.
inline KernelBlock sine_matrix(int beta, double xi, double eta) {
  if (beta != 1 && beta != 4) throw std::invalid_argument("sine_matrix: beta must be 1 or 4");
  const double w = beta == 4 ? 2.0 * pi : pi;
  KernelBlock k;
  k.S = detail::sinc(w * (xi - eta));
  k.ST = k.S;
  k.D = w * detail::sinc_prime(w * (xi - eta));
  k.Iminus = -sine_integral(w * (eta - xi)) / w;
  if (beta == 1) {
    k.Iminus -= half_sign(xi, eta);
    k.delta_flag = 1;
  }
  return k;
}

// ---------------------------------------------------------------- Bessel

// kappa_alpha(x, y) = x J_{alpha+1/2}(x) J_{alpha-1/2}(y) - J_{alpha-1/2}(x) y J_{alpha+1/2}(y)
inline double kappa(double alpha, double x, double y) {
  return x * bessel_j(alpha + 0.5, x) * bessel_j(alpha - 0.5, y) -
         bessel_j(alpha - 0.5, x) * y * bessel_j(alpha + 0.5, y);
}

namespace detail {

// k-th derivative of J_nu at z.
inline double bessel_j_deriv(double nu, double z, int k) {
  double s = 0.0, binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    s += ((j % 2) ? -binom : binom) * bessel_j(nu - k + 2 * j, z);
    binom = binom * (k - j) / (j + 1);
  }
  return std::ldexp(s, -k);
}

// Scalar Bessel kernel of any real order A, with its xi-derivative:
//   sqrt(xi eta) / (xi^2 - eta^2) [pi xi J_{A+1}(pi xi) J_A(pi eta) - J_A(pi xi) pi eta J_{A+1}(pi eta)].
// Writing u(t) = t J_{A+1}(pi t), v(t) = J_A(pi t), F(t) = u(t) v(eta) - v(t) u(eta),
// the kernel is pi sqrt(xi eta) q / (xi + eta) with q = F(xi) / (xi - eta).
inline ValueAndSlope bessel_kernel_eval(double A, double xi, double eta, bool want_dx) {
  const double ze = pi * eta;
  const double ue = eta * bessel_j(A + 1.0, ze);
  const double ve = bessel_j(A, ze);
  const double h = xi - eta;
  double q = 0.0, dq = 0.0;
  if (std::abs(h) * (pi + 1.0 / std::min(xi, eta)) < 0.05) {
    constexpr int terms = 8;
    std::vector<double> d(terms);
    double pk = 1.0;  // pi^{k-1}
    for (int k = 1; k <= terms; ++k) {
      const double jk1 = bessel_j_deriv(A + 1.0, ze, k);
      const double jk1m = bessel_j_deriv(A + 1.0, ze, k - 1);
      const double uk = eta * pk * pi * jk1 + k * pk * jk1m;
      const double vk = pk * pi * bessel_j_deriv(A, ze, k);
      d[k - 1] = uk * ve - vk * ue;
      pk *= pi;
    }
    const Divided t = taylor_divided(d, h);
    q = t.q;
    dq = t.dq;
  } else {
    const double zx = pi * xi;
    const double jx1 = bessel_j(A + 1.0, zx), jx = bessel_j(A, zx);
    const double ux = xi * jx1;
    q = (ux * ve - jx * ue) / h;
    if (want_dx) {
      // u' = J_{A+1} + pi t J'_{A+1}, v' = pi J'_A, with 2 J'_nu = J_{nu-1} - J_{nu+1}
      const double jx2 = bessel_j(A + 2.0, zx), jxm = bessel_j(A - 1.0, zx);
      const double ud = jx1 + zx * 0.5 * (jx - jx2);
      const double vd = pi * 0.5 * (jxm - jx1);
      dq = (ud * ve - vd * ue - q) / h;
    }
  }
  const double s = std::sqrt(xi * eta);
  const double p = xi + eta;
  ValueAndSlope r{pi * s * q / p, 0.0};
  if (want_dx) {
    r.dx = pi * (0.5 * std::sqrt(eta / xi) * q / p + s * dq / p - s * q / (p * p));
  }
  return r;
}

inline void check_edge_args(double a, double xi, double eta, const char* what) {
  if (!(a > -1.0)) throw std::invalid_argument(std::string(what) + ": a must exceed -1");
  if (!(xi > 0.0) || !(eta > 0.0)) throw std::domain_error(std::string(what) + ": points must be positive");
}

}  // namespace detail

inline double bessel_scalar(double a, double xi, double eta) {
  detail::check_edge_args(a, xi, eta, "bessel_scalar");
  return detail::bessel_kernel_eval(a, xi, eta, false).value;
}

inline double bessel_scalar_dxi(double a, double xi, double eta) {
  detail::check_edge_args(a, xi, eta, "bessel_scalar_dxi");
  return detail::bessel_kernel_eval(a, xi, eta, true).dx;
}

// Hard-edge one-level densities.
inline double edge_density(int beta, double a, double xi) {
  detail::check_edge_args(a, xi, xi, "edge_density");
  const double z = pi * xi;
  switch (beta) {
    case 2:
      return 0.5 * pi * z * (std::pow(bessel_j(a, z), 2) - bessel_j(a - 1.0, z) * bessel_j(a + 1.0, z));
    case 1: {
      const double A = 2.0 * a + 1.0;
      return edge_density(2, A, xi) + 0.5 * pi * bessel_j(A, z) * (1.0 - bessel_j_primitive(A, z));
    }
    case 4:
      return edge_density(2, a, 2.0 * xi) -
             0.5 * pi * bessel_j(a - 1.0, 2.0 * z) * bessel_j_primitive(a + 1.0, 2.0 * z);
    default:
      throw std::invalid_argument("edge_density: beta must be 1, 2 or 4");
  }
}

// Hard-edge matrix kernels:
//   beta 1: S(xi,eta) = sqrt(xi/eta) K^{(2a+1)}(xi,eta) + (pi/2) J_{2a+1}(pi eta) int_{pi xi}^inf J_{2a+1}
//   beta 4: S(xi,eta) = sqrt(xi/eta) K^{(a-1)}(2xi,2eta) - (pi/2) J_{a-1}(2 pi eta) int_0^{2 pi xi} J_{a-1}
// where the last integral is continued analytically for a <= 0.
class BesselMatrixKernel {
 public:
  BesselMatrixKernel(int beta, double a) : beta_(beta), a_(a) {
    if (beta != 1 && beta != 4) throw std::invalid_argument("bessel_matrix: beta must be 1 or 4");
    if (!(a > -1.0)) throw std::invalid_argument("bessel_matrix: a must exceed -1");
    A_ = beta == 1 ? 2.0 * a + 1.0 : a - 1.0;
    s_ = beta == 1 ? 1.0 : 2.0;
  }

  // factor multiplying J_A(s pi eta) in the second term of S(xi, .)
  double x_term(double xi) const {
    const double z = s_ * pi * xi;
    return beta_ == 1 ? 0.5 * pi * (1.0 - bessel_j_primitive(A_, z))
                      : -0.5 * pi * bessel_j_primitive(A_, z);
  }

  double S(double xi, double eta, double xt) const {
    return std::sqrt(xi / eta) * kern(xi, eta) + bessel_j(A_, s_ * pi * eta) * xt;
  }
  double S(double xi, double eta) const {
    detail::check_edge_args(a_, xi, eta, "bessel_matrix");
    return S(xi, eta, x_term(xi));
  }

  double dSdx(double xi, double eta) const {
    const auto k = detail::bessel_kernel_eval(A_, s_ * xi, s_ * eta, true);
    const double first = std::sqrt(xi / eta) * s_ * k.dx + 0.5 / std::sqrt(xi * eta) * k.value;
    // d/dxi of the x_term is -+(pi/2) s pi J_A(s pi xi)
    const double dxt = -0.5 * pi * s_ * pi * bessel_j(A_, s_ * pi * xi);
    return first + bessel_j(A_, s_ * pi * eta) * dxt;
  }

  // -int_xi^eta S(xi, t) dt; the second term integrates in closed form.
  double I(double xi, double eta, double xt) const {
    auto f = [&](double t) { return std::sqrt(xi / t) * kern(xi, t); };
    const double first = integrate_panels(f, xi, eta, 0.25, 1e-12);
    const double z = s_ * pi;
    const double second = xt * (bessel_j_primitive(A_, z * eta) - bessel_j_primitive(A_, z * xi)) / z;
    return -(first + second);
  }

  KernelBlock block(double xi, double eta) const {
    detail::check_edge_args(a_, xi, eta, "bessel_matrix");
    const double xt_x = x_term(xi);
    KernelBlock k;
    k.S = S(xi, eta, xt_x);
    k.ST = S(eta, xi, x_term(eta));
    k.D = dSdx(xi, eta);
    k.Iminus = I(xi, eta, xt_x);
    if (beta_ == 1) {
      k.Iminus -= half_sign(xi, eta);
      k.delta_flag = 1;
    }
    return k;
  }

 private:
  double kern(double xi, double eta) const {
    return detail::bessel_kernel_eval(A_, s_ * xi, s_ * eta, false).value;
  }

  int beta_;
  double a_;
  double A_ = 0.0;
  double s_ = 1.0;
};

inline KernelBlock bessel_matrix(int beta, double a, double xi, double eta) {
  return BesselMatrixKernel(beta, a).block(xi, eta);
}

// Alternative forms of the hard-edge S entries.  form 0 lowers the Bessel
// order by one, form 1 raises it:
//   beta 1: sqrt(eta/xi) K^{(2a)} + (pi/2) J_{2a+1}(pi eta) [1 - int_0^{pi xi} J_{2a-1}]
//           sqrt(eta/xi) K^{(2a+2)} + (pi/2) J_{2a+1}(pi eta) [1 - int_0^{pi xi} J_{2a+3}]
//   beta 4: sqrt(eta/xi) K^{(a)}(2xi,2eta) - (pi/2) J_{a-1}(2 pi eta) int_0^{2 pi xi} J_{a+1}
//           sqrt(eta/xi) K^{(a-2)}(2xi,2eta) - (pi/2) J_{a-1}(2 pi eta) int_0^{2 pi xi} J_{a-3}
inline double bessel_s_alternative(int beta, double a, double xi, double eta, int form) {
  detail::check_edge_args(a, xi, eta, "bessel_s_alternative");
  const double r = std::sqrt(eta / xi);
  if (beta == 1) {
    const double order = form == 0 ? 2.0 * a : 2.0 * a + 2.0;
    const double prim = form == 0 ? 2.0 * a - 1.0 : 2.0 * a + 3.0;
    return r * detail::bessel_kernel_eval(order, xi, eta, false).value +
           0.5 * pi * bessel_j(2.0 * a + 1.0, pi * eta) * (1.0 - bessel_j_primitive(prim, pi * xi));
  }
  if (beta == 4) {
    const double order = form == 0 ? a : a - 2.0;
    const double prim = form == 0 ? a + 1.0 : a - 3.0;
    return r * detail::bessel_kernel_eval(order, 2.0 * xi, 2.0 * eta, false).value -
           0.5 * pi * bessel_j(a - 1.0, 2.0 * pi * eta) * bessel_j_primitive(prim, 2.0 * pi * xi);
  }
  throw std::invalid_argument("bessel_s_alternative: beta must be 1 or 4");
}

// ---------------------------------------------------------------- local coordinates

enum class Regime { bulk, hard_edge_plus, hard_edge_minus };

inline Regime parse_regime(const std::string& s) {
  if (s == "bulk") return Regime::bulk;
  if (s == "edge+" || s == "hard_edge_plus" || s == "edge") return Regime::hard_edge_plus;
  if (s == "edge-" || s == "hard_edge_minus") return Regime::hard_edge_minus;
  throw std::invalid_argument("unknown regime '" + s + "' (expected bulk, edge+ or edge-)");
}

// Center z_o = cos alpha_o and rank R of the local map x = cos(alpha_o + pi xi / R).
struct LocalCoords {
  double z_o = 0.0;
  double alpha_o = pi / 2.0;
  int R = 1;

  static LocalCoords at(double z_o, int R) {
    if (!(z_o >= -1.0 && z_o <= 1.0)) throw std::domain_error("LocalCoords: z_o must lie in [-1, 1]");
    if (R < 1) throw std::invalid_argument("LocalCoords: R must be positive");
    return {z_o, std::acos(z_o), R};
  }
  double x(double xi) const { return std::cos(alpha_o + pi * xi / R); }
  double dx(double xi) const { return -pi / R * std::sin(alpha_o + pi * xi / R); }
};

struct LimitKernelSpec {
  int beta = 2;
  Regime regime = Regime::bulk;
  double a = 0.0;
  double b = 0.0;
};

// Limit kernel as a callable of the local variables.  At the -1 edge the
// exponent b takes the place of a.
inline ScalarKernel limit_scalar_kernel(const LimitKernelSpec& spec) {
  if (spec.regime == Regime::bulk) return [](double x, double y) { return sine_scalar(x, y); };
  const double e = spec.regime == Regime::hard_edge_plus ? spec.a : spec.b;
  if (!(e > -1.0)) throw std::invalid_argument("limit kernel: edge exponent must exceed -1");
  return [e](double x, double y) { return bessel_scalar(e, x, y); };
}

inline MatrixKernel limit_matrix_kernel(const LimitKernelSpec& spec) {
  const int beta = spec.beta;
  if (beta != 1 && beta != 4) throw std::invalid_argument("limit matrix kernel: beta must be 1 or 4");
  if (spec.regime == Regime::bulk) return [beta](double x, double y) { return sine_matrix(beta, x, y); };
  const double e = spec.regime == Regime::hard_edge_plus ? spec.a : spec.b;
  const BesselMatrixKernel k(beta, e);
  return [k](double x, double y) { return k.block(x, y); };
}

}  // namespace symrmt
