#pragma once

// Value of a 2x2 matrix kernel at a point pair, and assembly of n points
// into the 2n x 2n block matrix used by the quaternion determinant.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace symrmt {

// Entries of the matrix kernel [[S, I - delta*eps], [D, S^T]] at (x, y).
// Iminus already has the step term subtracted when delta_flag is 1.
struct KernelBlock {
  double S = 0.0;
  double Iminus = 0.0;
  double D = 0.0;
  double ST = 0.0;
  int delta_flag = 0;
};

using ScalarKernel = std::function<double(double, double)>;
using MatrixKernel = std::function<KernelBlock(double, double)>;

// ½ sgn(x - y)
inline double half_sign(double x, double y) {
  return x > y ? 0.5 : (x < y ? -0.5 : 0.0);
}

// Block layout with the n x n blocks [[S, I], [D, S^T]], which is self-dual
// with respect to J = [[0, -I], [I, 0]].
inline Eigen::MatrixXd assemble_blocks(const MatrixKernel& k, std::span<const double> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd h(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const KernelBlock blk = k(points[j], points[l]);
      h(j, l) = blk.S;
      h(j, n + l) = blk.Iminus;
      h(n + j, l) = blk.D;
      h(n + j, n + l) = blk.ST;
    }
  }
  return h;
}

inline Eigen::MatrixXd assemble_scalar(const ScalarKernel& k, std::span<const double> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l) h(j, l) = k(points[j], points[l]);
  return h;
}

namespace detail {

struct ValueAndSlope {
  double value;
  double dx;
};

// Given d[k-1] = F^(k)(y), k = 1..K, of a function with F(y) = 0, returns
// q = F(y+h)/h and dq/dh from the truncated Taylor series.
struct Divided {
  double q;
  double dq;
};

inline Divided taylor_divided(const std::vector<double>& d, double h) {
  double q = 0.0, dq = 0.0, fact = 1.0;
  double hk1 = 1.0;  // h^{k-1}
  double hk2 = 0.0;  // h^{k-2}
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    fact *= k;
    q += d[i] * hk1 / fact;
    if (k >= 2) dq += d[i] * (k - 1) * hk2 / fact;
    hk2 = hk1;
    hk1 *= h;
  }
  return {q, dq};
}

}  // namespace detail

}  // namespace symrmt
