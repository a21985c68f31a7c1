#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "symrmt/ensembles.hpp"
#include "symrmt/stats.hpp"

using namespace symrmt;

namespace {

std::vector<EnsembleSpec> jacobi_specs() {
  return {{Family::AIII, 3, 0}, {Family::AIII, 3, 2}, {Family::BDI, 3, 0}, {Family::BDI, 3, 1},
          {Family::BDI, 3, 3},  EnsembleSpec::diii_from_N(4), EnsembleSpec::diii_from_N(5),
          {Family::CI, 3, 0},   {Family::CII, 3, 0},  {Family::CII, 3, 1}, {Family::SO_odd, 3, 0},
          {Family::USp_group, 3, 0}, {Family::SO_even, 3, 0}};
}

std::vector<EnsembleSpec> all_specs() {
  auto v = jacobi_specs();
  v.push_back({Family::AI, 3, 0});
  v.push_back({Family::AII, 3, 0});
  v.push_back({Family::CUE, 3, 0});
  return v;
}

std::vector<double> pooled_levels(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed) {
  std::vector<double> x;
  for (const SpectrumSample& s : sample_spectra(spec, count, seed, 1))
    x.insert(x.end(), s.levels.begin(), s.levels.end());
  return x;
}

std::vector<double> pooled(const McmcResult& m) {
  std::vector<double> x;
  for (const auto& s : m.samples) x.insert(x.end(), s.begin(), s.end());
  return x;
}

// unitary eigenvalues of a matrix, general solver
std::vector<cd> eigenvalues(const MatrixXcd& h) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(h, false);
  std::vector<cd> v(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  return v;
}

}  // namespace

// ---------------------------------------------------------------- Haar sampling

TEST(Haar, GroupResiduals) {
  Rng rng = substream(1, 0);
  for (int size : {1, 2, 5, 8}) {
    EXPECT_LT(group_residual(Group::U, haar_sample(Group::U, size, rng)), 1e-10);
    EXPECT_LT(group_residual(Group::O, haar_sample(Group::O, size, rng)), 1e-10);
    EXPECT_LT(group_residual(Group::SO, haar_sample(Group::SO, size, rng)), 1e-10);
  }
  for (int size : {2, 4, 10}) EXPECT_LT(group_residual(Group::USp, haar_sample(Group::USp, size, rng)), 1e-10);
  EXPECT_THROW(haar_sample(Group::USp, 3, rng), std::invalid_argument);
  EXPECT_THROW(haar_sample(Group::U, 0, rng), std::invalid_argument);
}

TEST(Haar, OrthogonalIdentity) {
  Rng rng = substream(2, 0);
  const MatrixXcd g = haar_sample(Group::O, 6, rng);
  const Eigen::MatrixXd r = g.real();
  EXPECT_LT((r * r.transpose() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Haar, CirclePhaseUniform) {
  Rng rng = substream(3, 0);
  cd mean = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += haar_sample(Group::U, 1, rng)(0, 0);
  EXPECT_LT(std::abs(mean / double(n)), 0.01);
}

TEST(Haar, LeftInvariance) {
  Rng rng = substream(4, 0);
  const MatrixXcd u = haar_sample(Group::U, 4, rng);
  std::vector<double> plain, shifted;
  for (int i = 0; i < 10000; ++i) {
    plain.push_back(haar_sample(Group::U, 4, rng).trace().real());
    shifted.push_back((u * haar_sample(Group::U, 4, rng)).trace().real());
  }
  EXPECT_LT(ks_distance(plain, shifted), 0.02);
}

// ---------------------------------------------------------------- realizations

TEST(Realize, MembershipResiduals) {
  for (const EnsembleSpec& spec : all_specs()) {
    Rng rng = substream(5, static_cast<std::uint64_t>(spec.family));
    for (int t = 0; t < 20; ++t) {
      const MatrixXcd h = realize(spec, haar_sample(spec.group(), spec.dim(), rng));
      EXPECT_LT(membership_residual(spec, h), 1e-8) << to_string(spec.family) << " L=" << spec.L;
    }
  }
}

TEST(Realize, IdentityIsBasePoint) {
  for (const EnsembleSpec& spec : jacobi_specs()) {
    const int d = spec.dim();
    const MatrixXcd h = realize(spec, MatrixXcd::Identity(d, d));
    EXPECT_LT((h - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-14) << to_string(spec.family);
    for (double t : spectrum(spec, h).thetas) EXPECT_NEAR(t, 0.0, 1e-7);
  }
}

TEST(Realize, CircularExamples) {
  Rng rng = substream(6, 0);
  const EnsembleSpec coe{Family::AI, 4, 0};
  const MatrixXcd g = haar_sample(Group::U, 4, rng);
  const MatrixXcd h = realize(coe, g);
  EXPECT_LT((h - g * g.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((h * h.adjoint() - MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Realize, RejectsElementsOutsideTheGroup) {
  const EnsembleSpec spec{Family::AIII, 2, 0};
  MatrixXcd g = MatrixXcd::Identity(4, 4);
  g(0, 0) = 1.1;
  EXPECT_THROW(realize(spec, g), std::invalid_argument);
  EXPECT_THROW(realize(spec, MatrixXcd::Identity(3, 3)), std::invalid_argument);
  // a complex unitary is not in O(n)
  Rng rng = substream(7, 0);
  EXPECT_THROW(realize({Family::BDI, 2, 0}, haar_sample(Group::U, 4, rng)), std::invalid_argument);
}

TEST(Realize, BDISignature) {
  const EnsembleSpec spec{Family::BDI, 1, 1};
  for (int t = 0; t < 20; ++t) {
    Rng rng = substream(8, t);
    const MatrixXcd h = realize(spec, haar_sample(Group::O, 3, rng));
    const Eigen::MatrixXd g = (h * Iprime(2, 1)).real();
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()));
    const auto ev = es.eigenvalues();
    EXPECT_LT(ev(0), -0.5);
    EXPECT_GT(ev(1), 0.5);
    EXPECT_GT(ev(2), 0.5);
  }
}

TEST(Realize, DIIIOddHasForcedDoubleOne) {
  const EnsembleSpec spec = EnsembleSpec::diii_from_N(5);
  ASSERT_EQ(spec.R, 2);
  for (int t = 0; t < 10; ++t) {
    Rng rng = substream(9, t);
    const MatrixXcd h = realize(spec, haar_sample(Group::SO, spec.dim(), rng));
    const auto ev = eigenvalues(h);
    const auto ones = std::count_if(ev.begin(), ev.end(), [](cd z) { return std::abs(z - 1.0) < 1e-6; });
    EXPECT_GE(ones, 2);
    const SpectrumSample s = spectrum(spec, h);
    EXPECT_EQ(s.forced, 2);
    EXPECT_EQ(s.pair_multiplicity, 2);
    ASSERT_EQ(s.thetas.size(), 2u);
    // every free eigenvalue appears as lambda, lambda, conj lambda, conj lambda
    for (double th : s.thetas) {
      const auto hits = std::count_if(ev.begin(), ev.end(), [&](cd z) {
        return std::abs(z - std::polar(1.0, th)) < 1e-5 || std::abs(z - std::polar(1.0, -th)) < 1e-5;
      });
      EXPECT_EQ(hits, 4);
    }
  }
}

TEST(Realize, DIIIAlwaysDexter) {
  // Pf(H J) = Pf(J) on every draw, for both parities
  for (int N : {4, 5, 6}) {
    const EnsembleSpec spec = EnsembleSpec::diii_from_N(N);
    for (int t = 0; t < 20; ++t) {
      Rng rng = substream(10, t);
      const MatrixXcd h = realize(spec, haar_sample(Group::SO, spec.dim(), rng));
      const Eigen::MatrixXd g = (h * J_matrix(N)).real();
      EXPECT_NEAR(pfaffian(0.5 * (g - g.transpose())), pfaffian(canonical_J(N)), 1e-9);
    }
  }
}

// ---------------------------------------------------------------- spectra

TEST(Spectrum, CountsAndOrdering) {
  for (const EnsembleSpec& spec : all_specs()) {
    for (int t = 0; t < 20; ++t) {
      Rng rng = substream(11, t);
      const SpectrumSample s = draw_spectrum(spec, rng);
      ASSERT_EQ(s.thetas.size(), static_cast<std::size_t>(spec.R)) << to_string(spec.family);
      EXPECT_TRUE(std::is_sorted(s.thetas.begin(), s.thetas.end()));
      EXPECT_EQ(s.forced, spec.forced());
      const int per_level = spec.circular() ? (spec.family == Family::AII ? 2 : 1) : 2 * s.pair_multiplicity;
      EXPECT_EQ(s.forced + per_level * spec.R, spec.dim()) << to_string(spec.family);
      const double top = spec.circular() ? 2 * pi : pi;
      for (std::size_t k = 0; k < s.thetas.size(); ++k) {
        EXPECT_GE(s.thetas[k], 0.0);
        EXPECT_LE(s.thetas[k], top);
        EXPECT_DOUBLE_EQ(s.levels[k], std::cos(s.thetas[k]));
      }
    }
  }
}

TEST(Spectrum, ForcedCounts) {
  EXPECT_EQ((EnsembleSpec{Family::AIII, 2, 3}.forced()), 3);
  EXPECT_EQ((EnsembleSpec{Family::BDI, 2, 1}.forced()), 1);
  EXPECT_EQ(EnsembleSpec::diii_from_N(7).forced(), 2);
  EXPECT_EQ(EnsembleSpec::diii_from_N(6).forced(), 0);
  EXPECT_EQ((EnsembleSpec{Family::CII, 2, 2}.forced()), 4);
  EXPECT_EQ((EnsembleSpec{Family::CI, 2, 0}.forced()), 0);
}

TEST(Spectrum, ConjugationInvariance) {
  // k in K = U(M) x U(N) for A III and O(M) x O(N) for BD I
  for (Family f : {Family::AIII, Family::BDI}) {
    const EnsembleSpec spec{f, 2, 1};
    const Group small = f == Family::AIII ? Group::U : Group::O;
    for (int t = 0; t < 10; ++t) {
      Rng rng = substream(12, t);
      const MatrixXcd h = realize(spec, haar_sample(spec.group(), spec.dim(), rng));
      MatrixXcd k = MatrixXcd::Zero(5, 5);
      k.topLeftCorner(3, 3) = haar_sample(small, 3, rng);
      k.bottomRightCorner(2, 2) = haar_sample(small, 2, rng);
      const MatrixXcd hk = k * h * k.adjoint();
      EXPECT_LT(membership_residual(spec, hk), 1e-8);
      const SpectrumSample a = spectrum(spec, h), b = spectrum(spec, hk);
      for (int j = 0; j < spec.R; ++j) EXPECT_NEAR(a.thetas[j], b.thetas[j], 1e-8);
    }
  }
}

TEST(Spectrum, RejectsNonUnitary) {
  const EnsembleSpec spec{Family::AIII, 1, 0};
  EXPECT_THROW(spectrum(spec, 2.0 * MatrixXcd::Identity(2, 2)), std::runtime_error);
}

TEST(Spectrum, AIIIRankOneUniformLevels) {
  const auto x = pooled_levels({Family::AIII, 1, 0}, 100000, 13);
  EXPECT_LT(ks_distance(x, [](double v) { return uniform_cdf(-1, 1, v); }), 0.01);
}

TEST(Spectrum, BDIRankOneUniformAngles) {
  std::vector<double> th;
  for (const SpectrumSample& s : sample_spectra({Family::BDI, 1, 0}, 100000, 14, 1)) th.push_back(s.thetas[0]);
  EXPECT_LT(ks_distance(th, [](double v) { return uniform_cdf(0, pi, v); }), 0.01);
}

TEST(Spectrum, CIRankOneUniformLevels) {
  const auto x = pooled_levels({Family::CI, 1, 0}, 100000, 15);
  EXPECT_LT(ks_distance(x, [](double v) { return uniform_cdf(-1, 1, v); }), 0.01);
}

TEST(Spectrum, GlobalDensityIsArcsine) {
  const std::vector<EnsembleSpec> seven{{Family::AIII, 30, 0}, {Family::BDI, 30, 0}, EnsembleSpec::diii_from_N(60),
                                        {Family::CI, 30, 0},   {Family::CII, 30, 0}, {Family::SO_odd, 30, 0},
                                        {Family::SO_even, 30, 0}};
  std::vector<double> x;
  for (std::size_t i = 0; i < seven.size(); ++i) {
    const auto part = pooled_levels(seven[i], 2000 / seven.size() + 1, 16 + i);
    x.insert(x.end(), part.begin(), part.end());
  }
  EXPECT_LT(ks_distance(x, arcsine_cdf), 0.03);
}

TEST(Sampling, ThreadCountIndependent) {
  const EnsembleSpec spec{Family::CII, 3, 1};
  const auto one = sample_spectra(spec, 40, 99, 1), many = sample_spectra(spec, 40, 99, 4);
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].thetas, many[i].thetas);
  Rng rng = substream(99, 7);
  EXPECT_EQ(draw_spectrum(spec, rng).thetas, one[7].thetas);
}

TEST(Sampling, SubstreamsDiffer) {
  Rng a = substream(1, 0), b = substream(1, 1), c = substream(2, 0), d = substream(1, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_EQ(x, d());
}

// ---------------------------------------------------------------- specs and parameters

TEST(EnsembleSpec, Validation) {
  EXPECT_THROW((EnsembleSpec{Family::AIII, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((EnsembleSpec{Family::CI, 2, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((EnsembleSpec{Family::DIII, 2, 2}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((EnsembleSpec{Family::CII, 2, 3}.validate()));
  EXPECT_EQ((EnsembleSpec{Family::AIII, 3, 2}.dim()), 8);
  EXPECT_EQ(EnsembleSpec::diii_from_N(5).dim(), 10);
  EXPECT_EQ(parse_family("SO_odd"), Family::SO_odd);
  EXPECT_THROW(parse_family("E6"), std::invalid_argument);
}

TEST(TableParams, Examples) {
  auto check = [](EnsembleSpec s, double beta, double a, double b) {
    const JacobiParams p = table_params(s);
    EXPECT_DOUBLE_EQ(p.beta, beta) << to_string(s.family);
    EXPECT_DOUBLE_EQ(p.a, a) << to_string(s.family);
    EXPECT_DOUBLE_EQ(p.b, b) << to_string(s.family);
  };
  check({Family::AIII, 2, 0}, 2, 0, 0);
  check({Family::CII, 2, 1}, 4, 3, 1);
  check({Family::SO_even, 2, 0}, 2, -0.5, -0.5);
  check({Family::BDI, 2, 3}, 1, 1, -0.5);
  check(EnsembleSpec::diii_from_N(4), 4, 0, 0);
  check(EnsembleSpec::diii_from_N(5), 4, 2, 0);
  check({Family::USp_group, 2, 0}, 2, 0.5, 0.5);
  check({Family::SO_odd, 2, 0}, 2, 0.5, -0.5);
  check({Family::CI, 2, 0}, 1, 0, 0);
}

TEST(TableParams, CircularFamiliesRejected) {
  for (Family f : {Family::AI, Family::AII, Family::CUE}) {
    EXPECT_THROW(table_params({f, 2, 0}), circular_ensemble_error);
  }
  EXPECT_EQ(circular_beta({Family::AII, 2, 0}), 4);
}

TEST(RootSystem, CIIMultiplicities) {
  const RootSystem rs = root_system({Family::CII, 2, 3});
  EXPECT_EQ(rs.multiplicity(RootKind::difference), 4);
  EXPECT_EQ(rs.multiplicity(RootKind::sum), 4);
  EXPECT_EQ(rs.multiplicity(RootKind::single), 12);
  EXPECT_EQ(rs.multiplicity(RootKind::twice), 3);
}

TEST(WeylDensity, CIRankOneIsAbsSine) {
  const EnsembleSpec spec{Family::CI, 1, 0};
  const double c = weyl_density(spec, {1.0}) / std::abs(std::sin(1.0));
  for (double t : {0.1, 0.7, 1.9, 3.0}) EXPECT_NEAR(weyl_density(spec, {t}), c * std::abs(std::sin(t)), 1e-14);
}

TEST(WeylDensity, ProportionalToJacobiForm) {
  std::mt19937_64 rng(21);
  for (const EnsembleSpec& spec : all_specs()) {
    std::uniform_real_distribution<double> u(0.0, spec.circular() ? 2 * pi : pi);
    double lo = INFINITY, hi = -INFINITY;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> th(spec.R);
      for (double& v : th) v = u(rng);
      const double ratio = weyl_density(spec, th) / jacobi_form_density(spec, th);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    EXPECT_LT((hi - lo) / hi, 1e-9) << to_string(spec.family) << " L=" << spec.L;
  }
}

TEST(WeylDensity, VanishesAtTheEdges) {
  EXPECT_EQ(weyl_density({Family::CI, 2, 0}, {0.0, 1.0}), 0.0);
  EXPECT_EQ(weyl_density({Family::SO_odd, 2, 0}, {1.0, 0.0}), 0.0);
  // sin(pi) is 1.2e-16 in floating point
  EXPECT_LT(weyl_density({Family::USp_group, 2, 0}, {pi, 1.0}), 1e-30);
  EXPECT_EQ(weyl_density({Family::AIII, 2, 0}, {0.5, 0.5}), 0.0);
}

// ---------------------------------------------------------------- MCMC

TEST(Mcmc, RankOneUniform) {
  Rng rng = substream(30, 0);
  const McmcResult m = mcmc_jacobi(1, 2.0, 0.0, 0.0, 100000, 2000, rng);
  EXPECT_LT(ks_distance(pooled(m), [](double v) { return uniform_cdf(-1, 1, v); }), 0.01);
}

TEST(Mcmc, RankOneArcsine) {
  Rng rng = substream(31, 0);
  const McmcResult m = mcmc_jacobi(1, 1.0, -0.5, -0.5, 100000, 2000, rng);
  EXPECT_LT(ks_distance(pooled(m), arcsine_cdf), 0.01);
}

TEST(Mcmc, MatchesMatrixModel) {
  Rng rng = substream(32, 0);
  const McmcResult m = mcmc_jacobi(3, 2.0, 0.0, 0.0, 100000, 2000, rng);
  EXPECT_LT(ks_distance(pooled(m), pooled_levels({Family::AIII, 3, 0}, 20000, 33)), 0.02);
}

TEST(Mcmc, AcceptanceAndChainAgreement) {
  Rng r1 = substream(34, 0), r2 = substream(34, 1);
  const McmcResult a = mcmc_jacobi(4, 4.0, 1.0, 0.0, 50000, 2000, r1);
  const McmcResult b = mcmc_jacobi(4, 4.0, 1.0, 0.0, 50000, 2000, r2);
  for (const McmcResult* m : {&a, &b}) {
    EXPECT_GE(m->acceptance, 0.2);
    EXPECT_LE(m->acceptance, 0.6);
    for (const auto& s : m->samples)
      for (double v : s) ASSERT_TRUE(v > -1 && v < 1);
  }
  EXPECT_LT(ks_distance(pooled(a), pooled(b)), 0.02);
}

TEST(Mcmc, RejectsInvalidParameters) {
  Rng rng = substream(35, 0);
  EXPECT_THROW(mcmc_jacobi(0, 2, 0, 0, 10, 10, rng), std::invalid_argument);
  EXPECT_THROW(mcmc_jacobi(2, 0, 0, 0, 10, 10, rng), std::invalid_argument);
  EXPECT_THROW(mcmc_jacobi(2, 2, -1, 0, 10, 10, rng), std::invalid_argument);
  EXPECT_THROW(mcmc_jacobi(2, 2, 0, -1.5, 10, 10, rng), std::invalid_argument);
}
