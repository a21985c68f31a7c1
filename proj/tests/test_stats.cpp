#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "symrmt/ensembles.hpp"
#include "symrmt/stats.hpp"

using namespace symrmt;

namespace {

double sinc2(double r) {
  const double s = std::sin(pi * r) / (pi * r);
  return s * s;
}

// levels of a circular ensemble in units of the mean spacing, centered at pi
std::vector<std::vector<double>> circular_unfolded(Family f, int n, std::size_t draws, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  for (const SpectrumSample& s : sample_spectra({f, n, 0}, draws, seed, 1)) {
    std::vector<double> xi;
    for (double t : s.thetas) xi.push_back((t - pi) * n / (2 * pi));
    out.push_back(xi);
  }
  return out;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

// ---------------------------------------------------------------- histograms

TEST(EmpiricalDensity, ConstantSampleIsOneSpike) {
  const Histogram h = empirical_density(std::vector<double>(50, 0.3), 11);
  EXPECT_EQ(std::count_if(h.counts.begin(), h.counts.end(), [](std::size_t c) { return c > 0; }), 1);
  EXPECT_EQ(h.total, 50u);
}

TEST(EmpiricalDensity, UniformWithinPoissonBands) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> x(100000);
  for (double& v : x) v = u(rng);
  const std::size_t bins = 40;
  const Histogram h = empirical_density(x, bins, -1, 1);
  const double expect = 100000.0 / bins, p = 1.0 / bins;
  const double sigma = std::sqrt(100000.0 * p * (1 - p));
  for (std::size_t c : h.counts) EXPECT_LT(std::abs(double(c) - expect), 3 * sigma);
  double mass = 0;
  for (double d : h.density) mass += d * h.width();
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(EmpiricalDensity, Errors) {
  EXPECT_THROW(empirical_density({}, 10), std::invalid_argument);
  EXPECT_THROW(empirical_density({0.5}, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(empirical_density({5.0}, 4, 0, 1), std::invalid_argument);
}

// ---------------------------------------------------------------- KS

TEST(KsDistance, SamplesFromTheReference) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(10000);
  for (double& v : x) v = u(rng);
  EXPECT_LT(ks_distance(x, [](double v) { return uniform_cdf(0, 1, v); }), 0.0136);
}

TEST(KsDistance, IdenticalSamplesAgainstContinuousCdf) {
  EXPECT_GE(ks_distance(std::vector<double>(100, 0.3), [](double v) { return uniform_cdf(0, 1, v); }), 0.5);
  EXPECT_GE(ks_distance(std::vector<double>(100, 0.6), [](double v) { return uniform_cdf(0, 1, v); }), 0.5);
}

TEST(KsDistance, ShiftEqualsMovedMass) {
  // U[0,1] against U[0.1, 1.1]: sup |F - G| = 0.1
  std::vector<double> a, b;
  for (int i = 0; i < 100000; ++i) {
    const double t = (i + 0.5) / 100000;
    a.push_back(t);
    b.push_back(t + 0.1);
  }
  EXPECT_NEAR(ks_distance(a, [](double v) { return uniform_cdf(0.1, 1.1, v); }), 0.1, 1e-4);
  EXPECT_NEAR(ks_distance(a, b), 0.1, 1e-4);
  EXPECT_DOUBLE_EQ(ks_distance(a, a), 0.0);
}

TEST(KsDistance, TwoSampleTies) {
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{1, 1, 2}, std::vector<double>{1, 2, 2}), 1.0 / 3);
  EXPECT_THROW(ks_distance(std::vector<double>{}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Cdfs, ArcsineAndTabulated) {
  EXPECT_DOUBLE_EQ(arcsine_cdf(0), 0.5);
  EXPECT_DOUBLE_EQ(arcsine_cdf(-1), 0.0);
  EXPECT_DOUBLE_EQ(arcsine_cdf(1), 1.0);
  const TabulatedCdf lin([](double x) { return x; }, 0, 2, 400);
  for (double x : {0.3, 1.0, 1.7}) EXPECT_NEAR(lin(x), x * x / 4, 1e-5);
  EXPECT_EQ(lin(-1), 0.0);
  EXPECT_EQ(lin(3), 1.0);
}

TEST(StatReport, Gate) {
  EXPECT_TRUE(StatReport::gate("a", "ks_distance", 0.01, 0.02).pass);
  EXPECT_TRUE(StatReport::gate("a", "ks_distance", 0.02, 0.02).pass);
  EXPECT_FALSE(StatReport::gate("a", "ks_distance", 0.03, 0.02).pass);
  EXPECT_FALSE(StatReport::gate("a", "ks_distance", NAN, 0.02).pass);
}

// ---------------------------------------------------------------- rescaling

TEST(RescaleLevels, Examples) {
  const double alpha = std::acos(0.3);
  EXPECT_NEAR(rescale_levels({alpha}, Regime::bulk, 0.3, 50)[0], 0.0, 1e-14);
  EXPECT_NEAR(rescale_levels({pi / 40}, Regime::hard_edge_plus, 1.0, 40)[0], 1.0, 1e-14);
  EXPECT_NEAR(rescale_levels({pi - pi / 40}, Regime::hard_edge_minus, -1.0, 40)[0], 1.0, 1e-13);
  EXPECT_THROW(rescale_levels({0.1}, Regime::bulk, 1.0, 10), std::domain_error);
  EXPECT_THROW(rescale_levels({0.1}, Regime::hard_edge_plus, 0.5, 10), std::domain_error);
}

TEST(RescaleLevels, RoundTripWithCosineMap) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, pi);
  std::vector<double> th(200);
  for (double& t : th) t = u(rng);
  const std::vector<std::pair<Regime, double>> cases{
      {Regime::bulk, 0.0}, {Regime::bulk, -0.6}, {Regime::hard_edge_plus, 1.0}, {Regime::hard_edge_minus, -1.0}};
  for (auto [regime, z] : cases) {
    const auto xi = rescale_levels(th, regime, z, 37);
    const ChangeOfVariables X = local_change_of_variables(regime, z, 37);
    for (std::size_t k = 0; k < th.size(); ++k) EXPECT_NEAR(X.map(xi[k]), std::cos(th[k]), 1e-12);
  }
}

TEST(RescaleLevels, Affine) {
  const auto xi = rescale_levels({0.2, 0.5, 0.8}, Regime::bulk, 0.1, 20);
  EXPECT_NEAR(xi[2] - xi[1], xi[1] - xi[0], 1e-13);
  EXPECT_NEAR(xi[1] - xi[0], 0.3 * 20 / pi, 1e-13);
}

// ---------------------------------------------------------------- pair correlation

TEST(PairCorrelation, PoissonIsFlat) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-30, 30);
  std::vector<std::vector<double>> draws(500, std::vector<double>(60));
  for (auto& d : draws)
    for (double& v : d) v = u(rng);
  const PairCorrelation pc = pair_correlation_estimate(draws, 20, 15, 3);
  EXPECT_NEAR(pc.density, 1.0, 0.02);
  for (double g : pc.g) EXPECT_NEAR(g, 1.0, 0.07);
}

TEST(PairCorrelation, CueMatchesSineKernel) {
  const auto draws = circular_unfolded(Family::CUE, 50, 2000, 5);
  const PairCorrelation pc = pair_correlation_estimate(draws, 15, 30, 3);
  for (std::size_t k = 0; k < pc.r.size(); ++k)
    if (pc.r[k] >= 0.2 && pc.r[k] <= 2) EXPECT_NEAR(pc.g[k], 1 - sinc2(pc.r[k]), 0.05) << pc.r[k];
}

TEST(PairCorrelation, RepulsionAtSmallGaps) {
  for (Family f : {Family::AI, Family::CUE, Family::AII}) {
    const auto draws = circular_unfolded(f, 40, 1000, 6);
    const PairCorrelation pc = pair_correlation_estimate(draws, 12, 20, 2);
    EXPECT_LT(pc.g[0], 0.2) << to_string(f);
  }
}

TEST(PairCorrelation, MeasureSideMatchesSineKernel) {
  // Metropolis draws of the beta = 2, a = b = 0 measure at R = 50, bulk centre
  Rng rng = substream(7, 0);
  const McmcResult m = mcmc_jacobi(50, 2.0, 0.0, 0.0, 4000, 2000, rng);
  std::vector<std::vector<double>> draws;
  for (const auto& s : m.samples) {
    std::vector<double> th;
    for (double x : s) th.push_back(std::acos(x));
    draws.push_back(rescale_levels(th, Regime::bulk, 0.0, 50));
  }
  const PairCorrelation pc = pair_correlation_estimate(draws, 8, 20, 2.5);
  for (std::size_t k = 0; k < pc.r.size(); ++k)
    if (pc.r[k] >= 0.2) EXPECT_NEAR(pc.g[k], 1 - sinc2(pc.r[k]), 0.07) << pc.r[k];
}

TEST(PairCorrelation, Errors) {
  EXPECT_THROW(pair_correlation_estimate(std::vector<std::vector<double>>(10, {0.0}), 1, 5, 1), std::invalid_argument);
  EXPECT_THROW(pair_correlation_estimate(std::vector<std::vector<double>>(100, {5.0}), 1, 5, 1),
               std::invalid_argument);
}

// ---------------------------------------------------------------- edge statistics

TEST(EdgeStatistics, UnitaryEdgeMatchesEdgeDensity) {
  const EnsembleSpec spec{Family::AIII, 40, 0};
  std::vector<double> xi;
  for (const SpectrumSample& s : sample_spectra(spec, 5000, 8, 1))
    for (double x : rescale_levels(s.thetas, Regime::hard_edge_plus, 1.0, spec.R))
      if (x <= 3.0) xi.push_back(x);
  const TabulatedCdf cdf([](double x) { return x <= 0 ? 0.0 : edge_density(2, 0, x); }, 0.0, 3.0, 3000);
  EXPECT_LT(ks_distance(xi, [&](double x) { return cdf(x); }), 0.05);
}

// ---------------------------------------------------------------- kernel convergence

TEST(Convergence, UnitaryBulk) {
  const ConvergenceReport r = convergence_report("bulk", local_finite_kernel(2, 0, 0, Regime::bulk, 0.0),
                                                 local_limit_kernel(2, 0, 0, Regime::bulk), grid(-2, 2, 9), {200, 400},
                                                 0.02);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_TRUE(r.reports[0].pass) << r.reports[0].value;
  EXPECT_LT(r.reports[1].max_abs_error / r.reports[0].max_abs_error, 0.7);
  EXPECT_TRUE(r.monotone);
  EXPECT_LE(r.reports[0].l2_error, r.reports[0].max_abs_error);
}

TEST(Convergence, UnitaryHardEdge) {
  const ConvergenceReport r =
      convergence_report("edge", local_finite_kernel(2, 0, 0, Regime::hard_edge_plus, 1.0),
                         local_limit_kernel(2, 0, 0, Regime::hard_edge_plus), grid(0.2, 3, 8), {400}, 0.03);
  EXPECT_TRUE(r.reports[0].pass) << r.reports[0].value;
}

TEST(Convergence, OrthogonalHardEdgeBelowZero) {
  const ConvergenceReport r =
      convergence_report("edge", local_finite_kernel(1, -0.5, 0, Regime::hard_edge_plus, 1.0),
                         local_limit_kernel(1, -0.5, 0, Regime::hard_edge_plus), grid(0.2, 3, 6), {400}, 0.05);
  EXPECT_TRUE(r.reports[0].pass) << r.reports[0].value;
}
