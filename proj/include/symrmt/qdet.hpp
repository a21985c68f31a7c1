#pragma once

// Pfaffians, Dyson's quaternion determinant of self-dual matrices,
// n-level correlation functions, and changes of variables for kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kernel_block.hpp"

namespace symrmt {

// J = [[0, -I], [I, 0]] of size 2n.
inline Eigen::MatrixXd canonical_J(Eigen::Index n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return j;
}

// Parlett-Reid reduction of an antisymmetric matrix with pivoting.
template <class Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix a = input;
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("pfaffian: matrix must be square");
  const double norm = a.norm();
  if ((a + a.transpose()).norm() > 1e-10 * norm) {
    throw std::invalid_argument("pfaffian: matrix is not antisymmetric");
  }
  if (n % 2 != 0) return Scalar(0);
  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == Scalar(0)) return Scalar(0);
    pf *= a(k, k + 1);
    const Eigen::Index m = n - k - 2;
    if (m > 0) {
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = a.row(k).tail(m).transpose() / a(k, k + 1);
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m) += tau * c.transpose() - c * tau.transpose();
    }
  }
  return pf;
}

// Residual of H = J H^T J^T relative to |H|.
template <class Derived>
double self_duality_residual(const Eigen::MatrixBase<Derived>& h) {
  const Eigen::Index n = h.rows() / 2;
  const Eigen::MatrixXd j = canonical_J(n);
  using Scalar = typename Derived::Scalar;
  const auto js = j.template cast<Scalar>();
  const double r = (h - js * h.transpose() * js.transpose()).norm();
  return r / std::max(1.0, static_cast<double>(h.norm()));
}

// qdet H = Pf(H J) / Pf(J), which squares to det H and equals 1 at H = I.
template <class Derived>
typename Derived::Scalar qdet(const Eigen::MatrixBase<Derived>& h, double tol = 1e-8) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (h.rows() != h.cols() || h.rows() % 2 != 0) {
    throw std::invalid_argument("qdet: matrix must be square of even size");
  }
  if (self_duality_residual(h) > tol) throw std::invalid_argument("qdet: matrix is not self-dual");
  const Eigen::Index n = h.rows() / 2;
  const Matrix j = canonical_J(n).template cast<Scalar>();
  Matrix m = h * j;
  m = (m - m.transpose()).eval() / Scalar(2);
  return pfaffian(m) / pfaffian(j);
}

// Real part of a value that should be real; residues up to 1e-8 (relative)
// are dropped, anything beyond 1e-5 indicates a logic error.
inline double checked_real(std::complex<double> z) {
  const double scale = std::max(1.0, std::abs(z.real()));
  if (std::abs(z.imag()) > 1e-5 * scale) {
    throw std::runtime_error("imaginary residue " + std::to_string(z.imag()) + " in a real quantity");
  }
  return z.real();
}

namespace detail {

inline void require_distinct(std::span<const double> points) {
  std::vector<double> s(points.begin(), points.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw std::invalid_argument("correlation: points must be distinct");
  }
}

}  // namespace detail

// n-level correlation det[K(x_j, x_k)] of a scalar (beta = 2) kernel.
inline double correlation(const ScalarKernel& k, std::span<const double> points) {
  detail::require_distinct(points);
  return assemble_scalar(k, points).determinant();
}

// n-level correlation qdet[K(x_j, x_k)] of a matrix (beta = 1, 4) kernel.
inline double correlation(const MatrixKernel& k, std::span<const double> points) {
  detail::require_distinct(points);
  return qdet(assemble_blocks(k, points), 1e-6);
}

// Dispatch on beta; for beta = 2 only the S entries of the blocks are used.
inline double correlation(int beta, const MatrixKernel& k, std::span<const double> points) {
  if (beta == 2) return correlation(ScalarKernel([&k](double x, double y) { return k(x, y).S; }), points);
  if (beta == 1 || beta == 4) return correlation(k, points);
  throw std::invalid_argument("correlation: beta must be 1, 2 or 4");
}

// ---------------------------------------------------------------- changes of variables

// x = X(u) with derivative X'(u); must be strictly monotone where used.
struct ChangeOfVariables {
  std::function<double(double)> map;
  std::function<double(double)> deriv;

  static ChangeOfVariables identity() {
    return {[](double u) { return u; }, [](double) { return 1.0; }};
  }
};

// Throws unless X' keeps one strict sign and X is strictly monotone on the grid.
inline void validate_monotone(const ChangeOfVariables& X, std::span<const double> grid) {
  std::vector<double> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end());
  int sign = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = X.deriv(g[i]);
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      throw std::domain_error("change of variables is not monotone near u = " + std::to_string(g[i]));
    }
    sign = s;
    if (i > 0 && g[i] > g[i - 1] && (X.map(g[i]) - X.map(g[i - 1])) * sign <= 0.0) {
      throw std::domain_error("change of variables is not monotone near u = " + std::to_string(g[i]));
    }
  }
}

namespace detail {

inline int orientation(double du, double dv, double u, double v) {
  const int su = du > 0.0 ? 1 : (du < 0.0 ? -1 : 0);
  const int sv = dv > 0.0 ? 1 : (dv < 0.0 ? -1 : 0);
  if (su == 0 || su != sv) {
    throw std::domain_error("change of variables is not monotone between u = " + std::to_string(u) +
                            " and v = " + std::to_string(v));
  }
  return su;
}

}  // namespace detail

// K(u, v) -> sqrt|X'(u) X'(v)| K(X(u), X(v))
inline ScalarKernel rescale_scalar_kernel(ScalarKernel k, ChangeOfVariables X) {
  return [k = std::move(k), X = std::move(X)](double u, double v) {
    const double du = X.deriv(u), dv = X.deriv(v);
    detail::orientation(du, dv, u, v);
    return std::sqrt(std::abs(du * dv)) * k(X.map(u), X.map(v));
  };
}

// S -> S |X'(v)|, S^T -> S^T |X'(u)|, D -> s D |X'(u) X'(v)|, I - eps -> s (I - eps),
// with s = +1 for increasing and -1 for decreasing X.
inline MatrixKernel rescale_matrix_kernel(MatrixKernel k, ChangeOfVariables X) {
  return [k = std::move(k), X = std::move(X)](double u, double v) {
    const double du = X.deriv(u), dv = X.deriv(v);
    const int s = detail::orientation(du, dv, u, v);
    KernelBlock b = k(X.map(u), X.map(v));
    b.S *= std::abs(dv);
    b.ST *= std::abs(du);
    b.D *= s * std::abs(du * dv);
    b.Iminus *= s;
    return b;
  };
}

}  // namespace symrmt
