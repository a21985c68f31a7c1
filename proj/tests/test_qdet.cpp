#include <cmath>
#include <complex>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "symrmt/kernels_finite.hpp"
#include "symrmt/kernels_limit.hpp"
#include "symrmt/qdet.hpp"

using namespace symrmt;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_complex(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

// [[P, Q - Q^T], [R - R^T, P^T]] is self-dual for J = [[0, -I], [I, 0]]
Eigen::MatrixXcd random_self_dual(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd p = random_complex(n, n, rng), q = random_complex(n, n, rng), r = random_complex(n, n, rng);
  Eigen::MatrixXcd h(2 * n, 2 * n);
  h << p, q - q.transpose(), r - r.transpose(), p.transpose();
  return h;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Pfaffian, TwoByTwo) {
  Eigen::Matrix2d m;
  m << 0, 3.5, -3.5, 0;
  EXPECT_DOUBLE_EQ(pfaffian(m), 3.5);
}

TEST(Pfaffian, CanonicalFormSign) {
  for (int n = 1; n <= 6; ++n) {
    const double want = (n * (n + 1) / 2) % 2 ? -1.0 : 1.0;
    EXPECT_DOUBLE_EQ(pfaffian(canonical_J(n)), want) << n;
  }
}

TEST(Pfaffian, SquareIsDeterminant) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXcd a = random_complex(6, 6, rng);
    a = (a - a.transpose()).eval();
    const cd pf = pfaffian(a);
    EXPECT_LT(rel(pf * pf, a.determinant()), 1e-8);
  }
  EXPECT_EQ(pfaffian(Eigen::MatrixXd::Zero(3, 3)), 0.0);
  Eigen::Matrix2d bad;
  bad << 0, 1, 1, 0;
  EXPECT_THROW(pfaffian(bad), std::invalid_argument);
}

TEST(Pfaffian, SwapFlipsSign) {
  std::mt19937_64 rng(2);
  Eigen::MatrixXcd a = random_complex(6, 6, rng);
  a = (a - a.transpose()).eval();
  Eigen::MatrixXcd b = a;
  b.row(1).swap(b.row(4));
  b.col(1).swap(b.col(4));
  EXPECT_LT(std::abs(pfaffian(b) + pfaffian(a)), 1e-10 * std::max(1.0, std::abs(pfaffian(a))));
}

TEST(Qdet, Identity) {
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(qdet(Eigen::MatrixXd::Identity(2 * n, 2 * n)), 1.0, 1e-15);
}

TEST(Qdet, SquareIsDeterminant) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 5; ++n) {
    const Eigen::MatrixXcd h = random_self_dual(n, rng);
    const cd q = qdet(h);
    EXPECT_LT(rel(q * q, h.determinant()), 1e-8);
  }
}

TEST(Qdet, Sandwich) {
  std::mt19937_64 rng(4);
  const int n = 3;
  for (int t = 0; t < 5; ++t) {
    const Eigen::MatrixXcd h = random_self_dual(n, rng);
    const Eigen::MatrixXcd k = random_complex(n, 1, rng).col(0).asDiagonal();
    Eigen::MatrixXcd left = Eigen::MatrixXcd::Identity(2 * n, 2 * n), right = left;
    left.bottomRightCorner(n, n) = k;
    right.topLeftCorner(n, n) = k;
    EXPECT_LT(rel(qdet(left * h * right), k.determinant() * qdet(h)), 1e-8);
    left.topLeftCorner(n, n) *= -1.0;
    right.topLeftCorner(n, n) *= -1.0;
    EXPECT_LT(rel(qdet(left * h * right), k.determinant() * qdet(h)), 1e-8);
    // a full K needs its transpose on the right to stay self-dual
    const Eigen::MatrixXcd f = random_complex(n, n, rng);
    Eigen::MatrixXcd l2 = Eigen::MatrixXcd::Identity(2 * n, 2 * n), r2 = l2;
    l2.bottomRightCorner(n, n) = f;
    r2.topLeftCorner(n, n) = f.transpose();
    EXPECT_LT(rel(qdet(l2 * h * r2), f.determinant() * qdet(h)), 1e-8);
  }
}

TEST(Qdet, Negation) {
  std::mt19937_64 rng(5);
  for (int n : {2, 3}) {
    const Eigen::MatrixXcd h = random_self_dual(n, rng);
    EXPECT_LT(rel(qdet(Eigen::MatrixXcd(-h)), (n % 2 ? -1.0 : 1.0) * qdet(h)), 1e-10);
  }
}

TEST(Qdet, RejectsNonSelfDual) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(4, 4);
  h(0, 1) = 1.0;
  EXPECT_THROW(qdet(h), std::invalid_argument);
  EXPECT_THROW(qdet(Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
}

TEST(Correlation, OneLevelUnitary) {
  const ScalarKernel k = finite_scalar_kernel(7, 0.5, -0.5);
  const std::vector<double> x{0.37};
  EXPECT_NEAR(correlation(k, x), cd_kernel(7, 0.5, -0.5, 0.37, 0.37), 1e-14);
}

TEST(Correlation, TwoLevelSine) {
  const ScalarKernel k = sine_scalar;
  const std::vector<double> p{0.0, 0.5};
  EXPECT_NEAR(correlation(k, p), 1 - std::pow(2 / pi, 2), 1e-14);
  for (double s : {0.1, 0.9, 2.3}) {
    const std::vector<double> q{0.0, s};
    const double sn = std::sin(pi * s) / (pi * s);
    EXPECT_NEAR(correlation(k, q), 1 - sn * sn, 1e-14);
  }
  const std::vector<double> close{0.0, 1e-4};
  EXPECT_NEAR(correlation(k, close), 0.0, 1e-7);
  const std::vector<double> same{0.2, 0.2};
  EXPECT_THROW(correlation(k, same), std::invalid_argument);
}

TEST(Correlation, QuaternionTwoLevelSine) {
  const MatrixKernel k = [](double x, double y) { return sine_matrix(1, x, y); };
  // linear repulsion: R_2(0, s) ~ (pi^2 / 6) s
  for (double s : {1e-3, 1e-5}) {
    const std::vector<double> near{0.0, s};
    EXPECT_NEAR(correlation(k, near) / s, pi * pi / 6, 0.01 * pi * pi / 6) << s;
  }
  const std::vector<double> far{0.0, 5.0};
  EXPECT_NEAR(correlation(k, far), 1.0, 0.02);
  // one level: the density is 1
  const std::vector<double> one{0.3};
  EXPECT_NEAR(correlation(k, one), 1.0, 1e-14);
}

TEST(Correlation, NonnegativeAndSquareIsDeterminant) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int beta : {1, 4}) {
    const MatrixKernel k = finite_matrix_kernel(beta, 4, 0.5, 0.0);
    for (int n = 1; n <= 4; ++n)
      for (int t = 0; t < 3; ++t) {
        std::vector<double> pts;
        for (int i = 0; i < n; ++i) pts.push_back(u(rng));
        const double c = correlation(k, pts);
        EXPECT_GE(c, -1e-8);
        const double det = assemble_blocks(k, pts).determinant();
        EXPECT_NEAR(c * c, det, 1e-6 * std::max(1.0, std::abs(det)));
      }
  }
}

TEST(Correlation, BetaDispatch) {
  const MatrixKernel k = [](double x, double y) { return sine_matrix(4, x, y); };
  const std::vector<double> p{0.0, 0.25};
  const double s = sine_scalar(0.0, 0.5);
  EXPECT_NEAR(correlation(2, k, p), 1 - s * s, 1e-14);
  EXPECT_THROW(correlation(3, k, p), std::invalid_argument);
}

TEST(Rescale, IdentityLeavesKernelsUnchanged) {
  const ScalarKernel k = finite_scalar_kernel(5, 0.0, 0.0);
  const ScalarKernel r = rescale_scalar_kernel(k, ChangeOfVariables::identity());
  EXPECT_DOUBLE_EQ(r(0.1, -0.4), k(0.1, -0.4));
  const MatrixKernel m = finite_matrix_kernel(4, 3, 0.5, 0.5);
  const KernelBlock a = m(0.2, 0.6), b = rescale_matrix_kernel(m, ChangeOfVariables::identity())(0.2, 0.6);
  EXPECT_DOUBLE_EQ(a.S, b.S);
  EXPECT_DOUBLE_EQ(a.Iminus, b.Iminus);
  EXPECT_DOUBLE_EQ(a.D, b.D);
  EXPECT_DOUBLE_EQ(a.ST, b.ST);
}

TEST(Rescale, ScalarDeterminantPicksUpJacobian) {
  const int R = 12;
  const double alpha = 1.1;
  const ChangeOfVariables X{[=](double u) { return std::cos(alpha + pi * u / R); },
                            [=](double u) { return -pi / R * std::sin(alpha + pi * u / R); }};
  const ScalarKernel k = finite_scalar_kernel(R, 0.0, 0.5);
  const ScalarKernel r = rescale_scalar_kernel(k, X);
  const std::vector<double> u{-0.7, 0.2, 1.3};
  std::vector<double> x;
  double jac = 1.0;
  for (double v : u) {
    x.push_back(X.map(v));
    jac *= std::abs(X.deriv(v));
  }
  EXPECT_NEAR(correlation(r, u), correlation(k, x) * jac, 1e-12);
  // direct substitution into the localized kernel
  EXPECT_NEAR(r(0.2, 1.3), std::sqrt(std::abs(X.deriv(0.2) * X.deriv(1.3))) * cd_kernel(R, 0.0, 0.5, x[1], x[2]),
              1e-14);
}

TEST(Rescale, QuaternionDeterminantPicksUpJacobian) {
  const ChangeOfVariables X{[](double u) { return std::tanh(u); }, [](double u) { return 1 - std::tanh(u) * std::tanh(u); }};
  const MatrixKernel k = finite_matrix_kernel(1, 4, 0.0, 0.0);
  const MatrixKernel r = rescale_matrix_kernel(k, X);
  const std::vector<double> u{-0.3, 0.8};
  const std::vector<double> x{X.map(-0.3), X.map(0.8)};
  EXPECT_NEAR(correlation(r, u), correlation(k, x) * X.deriv(-0.3) * X.deriv(0.8), 1e-9);
}

TEST(Rescale, OrientationReversal) {
  const ChangeOfVariables X{[](double u) { return -u; }, [](double) { return -1.0; }};
  const SummationKernel base(1, 4, 0.5, -0.2);
  const MatrixKernel r = rescale_matrix_kernel([&](double x, double y) { return base.block(x, y); }, X);
  const double u = 0.3, v = -0.5, h = 1e-6;
  const KernelBlock b = r(u, v);
  EXPECT_NEAR(b.ST, r(v, u).S, 1e-13);
  EXPECT_NEAR(b.D, (r(u + h, v).S - r(u - h, v).S) / (2 * h), 1e-6);
  // I - eps = -int_u^v S(u, t) dt - eps(u - v) in the new variable
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return r(u, t).S; }, v, u, 10, 1e-13);
  EXPECT_NEAR(b.Iminus, integral - half_sign(u, v), 1e-9);
  // the qdet is unchanged up to the unit Jacobian
  const std::vector<double> pts{0.3, -0.5}, img{-0.3, 0.5};
  EXPECT_NEAR(correlation(r, pts), correlation(MatrixKernel([&](double x, double y) { return base.block(x, y); }), img),
              1e-10);
}

TEST(Rescale, RejectsNonMonotone) {
  const ChangeOfVariables X{[](double u) { return u * u; }, [](double u) { return 2 * u; }};
  const std::vector<double> grid{-0.5, 0.5};
  EXPECT_THROW(validate_monotone(X, grid), std::domain_error);
  const ScalarKernel r = rescale_scalar_kernel(sine_scalar, X);
  EXPECT_THROW(r(-0.5, 0.5), std::domain_error);
}
