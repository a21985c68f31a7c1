#pragma once

// Finite-N correlation kernels of the Jacobi ensembles: the unitary
// Christoffel-Darboux kernel, the weighted polynomials psi_N with their
// normalizations c_N, the integral operators eps and delta, and the
// orthogonal (beta = 1) and symplectic (beta = 4) kernels obtained from the
// unitary one by a rank-one correction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kernel_block.hpp"
#include "specfun.hpp"

namespace symrmt {

inline double weight(double x, double a, double b) {
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("weight: exponents must exceed -1");
  const double u = std::abs(1.0 - x);
  const double v = std::abs(1.0 + x);
  if ((u == 0.0 && a < 0.0) || (v == 0.0 && b < 0.0)) return std::numeric_limits<double>::infinity();
  return std::pow(u, a) * std::pow(v, b);
}

namespace detail {

inline void require_open(double x, const char* what) {
  if (!(x > -1.0 && x < 1.0)) throw std::domain_error(std::string(what) + ": point must lie in (-1, 1)");
}

// (log|Gamma(x)|, sign Gamma(x))
inline std::pair<double, int> log_abs_gamma(double x) {
  int s = 1;
  const double v = ::lgamma_r(x, &s);
  return {v, s};
}

inline double cd_prefactor(int N, double A, double B) {
  const auto [g1, s1] = log_abs_gamma(N + 1.0);
  const auto [g2, s2] = log_abs_gamma(N + A + B + 1.0);
  const auto [g3, s3] = log_abs_gamma(N + A);
  const auto [g4, s4] = log_abs_gamma(N + B);
  return s1 * s2 * s3 * s4 * std::exp(-(A + B) * std::log(2.0) + g1 + g2 - g3 - g4) /
         (2.0 * N + A + B);
}

inline double sqrt_weight(double x, double A, double B) {
  return std::pow(1.0 - x, A / 2.0) * std::pow(1.0 + x, B / 2.0);
}

inline double dlog_sqrt_weight(double x, double A, double B) {
  return -A / (2.0 * (1.0 - x)) + B / (2.0 * (1.0 + x));
}

// K_N(x, y) and its x-derivative.  Close to the diagonal the divided
// difference is replaced by its Taylor series about y; the switch is made
// on the scale of the local oscillation, N / sin(theta).
inline ValueAndSlope cd_eval(int N, double A, double B, double x, double y, bool want_dx) {
  const double C = cd_prefactor(N, A, B);
  const auto [pny, pmy] = jacobi_poly_pair(N, A, B, y);
  const double h = x - y;
  const double scale = N / std::max(std::sqrt(1.0 - y * y), 1.0 / N);
  double q = 0.0, dq = 0.0;
  if (std::abs(h) * scale < 0.05) {
    constexpr int terms = 8;
    std::vector<double> d(terms);
    for (int k = 1; k <= terms; ++k) {
      d[k - 1] = jacobi_poly_deriv(N, A, B, y, k) * pmy - jacobi_poly_deriv(N - 1, A, B, y, k) * pny;
    }
    const Divided t = taylor_divided(d, h);
    q = t.q;
    dq = t.dq;
  } else {
    const auto [pnx, pmx] = jacobi_poly_pair(N, A, B, x);
    q = (pnx * pmy - pmx * pny) / h;
    if (want_dx) {
      const double fx = jacobi_poly_deriv(N, A, B, x) * pmy - jacobi_poly_deriv(N - 1, A, B, x) * pny;
      dq = (fx - q) / h;
    }
  }
  const double sw = sqrt_weight(x, A, B) * sqrt_weight(y, A, B);
  ValueAndSlope r{C * sw * q, 0.0};
  if (want_dx) r.dx = C * sw * (q * dlog_sqrt_weight(x, A, B) + dq);
  return r;
}

inline void check_cd_args(int N, double A, double B, double x, double y) {
  if (N < 1) throw std::invalid_argument("cd_kernel: N must be at least 1");
  if (!(A > -2.0) || !(B > -2.0)) throw std::invalid_argument("cd_kernel: A and B must exceed -2");
  require_open(x, "cd_kernel");
  require_open(y, "cd_kernel");
}

}  // namespace detail

// Christoffel-Darboux kernel of the first N orthonormalized Jacobi
// polynomials with weight (1-x)^A (1+x)^B.
inline double cd_kernel(int N, double A, double B, double x, double y) {
  detail::check_cd_args(N, A, B, x, y);
  return detail::cd_eval(N, A, B, x, y, false).value;
}

inline double cd_kernel_dx(int N, double A, double B, double x, double y) {
  detail::check_cd_args(N, A, B, x, y);
  return detail::cd_eval(N, A, B, x, y, true).dx;
}

// ---------------------------------------------------------------- psi_N, c_N

inline double psi(int N, double A, double B, double t) {
  const double ea = (A - 1.0) / 2.0, eb = (B - 1.0) / 2.0;
  if ((t >= 1.0 && ea < 0.0) || (t <= -1.0 && eb < 0.0) || t > 1.0 || t < -1.0) {
    throw std::domain_error("psi: point outside the domain of the weight");
  }
  return std::pow(1.0 - t, ea) * std::pow(1.0 + t, eb) * jacobi_poly(N, A, B, t);
}

inline double psi_coeff(int N, double A, double B) {
  const auto [g1, s1] = detail::log_abs_gamma(N + 2.0);
  const auto [g2, s2] = detail::log_abs_gamma(N + A + B + 2.0);
  const auto [g3, s3] = detail::log_abs_gamma(N + A + 1.0);
  const auto [g4, s4] = detail::log_abs_gamma(N + B + 1.0);
  return s1 * s2 * s3 * s4 * std::exp(-(A + B + 1.0) * std::log(2.0) + g1 + g2 - g3 - g4);
}

struct PsiData {
  int N = 0;
  JacobiParams params;
  double c_N = 0.0;
};

inline PsiData make_psi_data(int N, const JacobiParams& p) {
  return {N, p, psi_coeff(N, p.A, p.B)};
}

// ---------------------------------------------------------------- eps, delta

namespace detail {

// Integral over [x, 1], x >= 0, of (1-t)^gamma (1+t)^eta p(t), gamma > -1,
// with p a polynomial of degree at most deg (or smooth on [0, 1]).
template <class P>
double upper_integral(double gamma, double eta, P&& p, int deg, double x) {
  const auto rule = cached_gauss_jacobi(deg / 2 + 16, gamma, 0.0);
  const double half = (1.0 - x) / 2.0;
  const double s = rule->apply([&](double u) {
    const double t = x + half * (1.0 + u);
    return std::pow(1.0 + t, eta) * p(t);
  });
  return std::pow(half, gamma + 1.0) * s;
}

// Integral over [x, 0], x < 0, of (1-t)^gamma (1+t)^eta p(t).  Gauss-Jacobi
// on [-1, 0] and [-1, x] when the weight is integrable at -1, otherwise
// panels in the angle variable.
template <class P>
double middle_integral(double gamma, double eta, P&& p, int deg, double x) {
  if (eta > -1.0) {
    auto pm = [&](double t) { return p(-t); };
    return upper_integral(eta, gamma, pm, deg, 0.0) - upper_integral(eta, gamma, pm, deg, -x);
  }
  auto f = [&](double phi) {
    const double t = std::cos(phi);
    return std::pow(1.0 - t, gamma) * std::pow(1.0 + t, eta) * p(t) * std::sin(phi);
  };
  return integrate_panels(f, pi / 2.0, std::acos(x), pi / (4.0 * (deg + 2)));
}

inline double full_integral(int N, double A, double B) {
  const auto rule = cached_gauss_jacobi(N / 2 + 16, (A - 1.0) / 2.0, (B - 1.0) / 2.0);
  return rule->apply([&](double t) { return jacobi_poly(N, A, B, t); });
}

}  // namespace detail

// (eps psi_N)(x) = ½ int_{-1}^x psi_N - ½ int_x^1 psi_N.
inline double eps_apply(int N, double A, double B, double x) {
  if (!(A > -1.0) || !(B > -1.0)) throw std::invalid_argument("eps_apply: A and B must exceed -1");
  detail::require_open(x, "eps_apply");
  const double ea = (A - 1.0) / 2.0, eb = (B - 1.0) / 2.0;
  auto p = [&](double t) { return jacobi_poly(N, A, B, t); };
  const double total = detail::full_integral(N, A, B);
  if (x >= 0.0) return 0.5 * total - detail::upper_integral(ea, eb, p, N, x);
  // mirror t -> -t maps the lower piece onto an upper one
  auto pm = [&](double t) { return jacobi_poly(N, A, B, -t); };
  return detail::upper_integral(eb, ea, pm, N, -x) - 0.5 * total;
}

// (delta psi_N)(x) = int_x^1 psi_N, continued analytically in A to A > -2.
// For A <= -1 the endpoint singularity is removed by subtracting P_N(1) and
// integrating the remaining power of (1-t) by parts.
inline double delta_apply(int N, double A, double B, double x) {
  if (!(A > -2.0)) throw std::invalid_argument("delta_apply: A must exceed -2");
  if (!(x > -1.0 && x <= 1.0)) throw std::domain_error("delta_apply: point must lie in (-1, 1]");
  if (x == 1.0) return 0.0;
  const double ea = (A - 1.0) / 2.0, eb = (B - 1.0) / 2.0;
  auto p = [&](double t) { return jacobi_poly(N, A, B, t); };
  if (x < 0.0) return delta_apply(N, A, B, 0.0) + detail::middle_integral(ea, eb, p, N, x);
  if (A > -1.0 + 1e-6) return detail::upper_integral(ea, eb, p, N, x);
  if (N < 1) throw std::invalid_argument("delta_apply: continuation needs N >= 1");
  // c = P_N(1) / (A + 1), analytic through A = -1
  const double c = std::exp(log_gamma(A + N + 1.0) - log_gamma(A + 2.0) - log_gamma(N + 1.0));
  const double p1 = c * (A + 1.0);
  const double g = (A + 1.0) / 2.0;
  auto q = [&](double t) { return (jacobi_poly(N, A, B, t) - p1) / (1.0 - t); };
  const double i1 = detail::upper_integral(g, eb, q, N, x);
  const double i2 = detail::upper_integral(g, (B - 3.0) / 2.0, [](double) { return 1.0; }, 0, x);
  return i1 + 2.0 * c * std::pow(1.0 - x, g) * std::pow(1.0 + x, eb) + (B - 1.0) * c * i2;
}

// ---------------------------------------------------------------- S_R1, S_R4

// Orthogonal (beta = 1) and symplectic (beta = 4) kernels:
//   beta 1: sqrt((1-x^2)/(1-y^2)) K_{R-1}(x,y) + c_{R-2} psi_{R-1}(y) (eps psi_{R-2})(x)
//           with (A, B) = (2a+1, 2b+1);
//   beta 4: ½ sqrt((1-x^2)/(1-y^2)) K_{2R}(x,y) - ½ c_{2R-1} psi_{2R}(y) (delta psi_{2R-1})(x)
//           with (A, B) = (a-1, b-1).
class SummationKernel {
 public:
  SummationKernel(int beta, int R, double a, double b) : beta_(beta), R_(R), a_(a), b_(b) {
    if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("summation kernel: a and b must exceed -1");
    const JacobiParams p = JacobiParams::for_beta(beta, a, b);
    A_ = p.A;
    B_ = p.B;
    if (beta == 1) {
      if (R < 2 || R % 2 != 0) throw std::invalid_argument("s_r1: R must be even and at least 2");
      ncd_ = R - 1;
      ny_ = R - 1;
      nx_ = R - 2;
      half_ = 1.0;
      corr_ = psi_coeff(R - 2, A_, B_);
    } else if (beta == 4) {
      if (R < 1) throw std::invalid_argument("s_r4: R must be positive");
      ncd_ = 2 * R;
      ny_ = 2 * R;
      nx_ = 2 * R - 1;
      half_ = 0.5;
      corr_ = -0.5 * psi_coeff(2 * R - 1, A_, B_);
    } else {
      throw std::invalid_argument("summation kernel: beta must be 1 or 4");
    }
  }

  int beta() const { return beta_; }
  int R() const { return R_; }
  double a() const { return a_; }
  double b() const { return b_; }

  // eps psi_{R-2}(x) for beta 1, delta psi_{2R-1}(x) for beta 4.
  double x_term(double x) const {
    return beta_ == 1 ? eps_apply(nx_, A_, B_, x) : delta_apply(nx_, A_, B_, x);
  }

  double first_term(double x, double y) const {
    check(x, y);
    return half_ * std::sqrt((1.0 - x * x) / (1.0 - y * y)) * detail::cd_eval(ncd_, A_, B_, x, y, false).value;
  }

  double second_term(double x, double y, double xt) const { return corr_ * psi(ny_, A_, B_, y) * xt; }
  double second_term(double x, double y) const { return second_term(x, y, x_term(x)); }

  double S(double x, double y, double xt) const { return first_term(x, y) + second_term(x, y, xt); }
  double S(double x, double y) const { return S(x, y, x_term(x)); }

  double dSdx(double x, double y) const {
    check(x, y);
    const auto k = detail::cd_eval(ncd_, A_, B_, x, y, true);
    const double sx = std::sqrt(1.0 - x * x);
    const double first = half_ * (-x / sx * k.value + sx * k.dx) / std::sqrt(1.0 - y * y);
    const double dxt = (beta_ == 1 ? 1.0 : -1.0) * psi(nx_, A_, B_, x);
    return first + corr_ * psi(ny_, A_, B_, y) * dxt;
  }

  // I(x, y) = -int_x^y S(x, z) dz, integrated in the angle of z.  The CD
  // kernel switches from its Taylor form to the quotient near z = x with a
  // jump of ~1e-11 relative; a tighter tolerance or deeper bisection only
  // chases that noise.  Panels span an eighth of an oscillation.
  double I(double x, double y, double xt) const {
    check(x, y);
    const double sx = std::sqrt(1.0 - x * x);
    auto f = [&](double phi) {
      const double z = std::cos(phi);
      return half_ * sx * detail::cd_eval(ncd_, A_, B_, x, z, false).value +
             corr_ * psi(ny_, A_, B_, z) * std::sin(phi) * xt;
    };
    return integrate_panels(f, std::acos(x), std::acos(y), pi / (4.0 * (ncd_ + 1)), 1e-10, 3);
  }
  double I(double x, double y) const { return I(x, y, x_term(x)); }

  KernelBlock block(double x, double y, double xt_x, double xt_y) const {
    KernelBlock k;
    k.S = S(x, y, xt_x);
    k.ST = S(y, x, xt_y);
    k.D = dSdx(x, y);
    k.delta_flag = beta_ == 1 ? 1 : 0;
    k.Iminus = I(x, y, xt_x) - (beta_ == 1 ? half_sign(x, y) : 0.0);
    return k;
  }
  KernelBlock block(double x, double y) const { return block(x, y, x_term(x), x_term(y)); }

 private:
  static void check(double x, double y) {
    detail::require_open(x, "summation kernel");
    detail::require_open(y, "summation kernel");
  }

  int beta_;
  int R_;
  double a_, b_;
  double A_ = 0.0, B_ = 0.0;
  int ncd_ = 0, ny_ = 0, nx_ = 0;
  double half_ = 1.0, corr_ = 0.0;
};

inline double s_r1(int R, double a, double b, double x, double y) {
  return SummationKernel(1, R, a, b).S(x, y);
}

inline double s_r4(int R, double a, double b, double x, double y) {
  return SummationKernel(4, R, a, b).S(x, y);
}

// Matrix kernel for finite R as a callable.
inline MatrixKernel finite_matrix_kernel(int beta, int R, double a, double b) {
  auto k = std::make_shared<const SummationKernel>(beta, R, a, b);
  return [k](double x, double y) { return k->block(x, y); };
}

// Unitary kernel K_R with weight (1-x)^a (1+x)^b as a callable.
inline ScalarKernel finite_scalar_kernel(int R, double a, double b) {
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("finite_scalar_kernel: a and b must exceed -1");
  return [=](double x, double y) { return cd_kernel(R, a, b, x, y); };
}

// 2n x 2n self-dual matrix of the finite kernel at the given points.
inline Eigen::MatrixXd assemble_matrix_kernel(int beta, int R, double a, double b,
                                              std::span<const double> points) {
  const SummationKernel k(beta, R, a, b);
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("assemble_matrix_kernel: points must be distinct");
  }
  std::vector<double> xt(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) xt[j] = k.x_term(points[j]);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd h(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const KernelBlock blk = k.block(points[j], points[l], xt[j], xt[l]);
      h(j, l) = blk.S;
      h(j, n + l) = blk.Iminus;
      h(n + j, l) = blk.D;
      h(n + j, n + l) = blk.ST;
    }
  }
  return h;
}

}  // namespace symrmt
