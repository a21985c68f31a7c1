#pragma once

// Matrix models of the compact symmetric spaces: Haar sampling on the
// classical groups, the realizations H = g Omega(g)^{-1} of the type I
// spaces, spectrum extraction, Weyl densities from root data, the map to
// Jacobi parameters, and a Metropolis sampler for the Jacobi measure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "qdet.hpp"
#include "rng.hpp"
#include "specfun.hpp"

namespace symrmt {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

enum class Family { AI, AII, AIII, BDI, DIII, CI, CII, CUE, SO_odd, USp_group, SO_even };

inline const std::vector<Family>& all_families() {
  static const std::vector<Family> f{Family::AI,  Family::AII, Family::AIII,     Family::BDI,
                                     Family::DIII, Family::CI,  Family::CII,      Family::CUE,
                                     Family::SO_odd, Family::USp_group, Family::SO_even};
  return f;
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::AI: return "AI";
    case Family::AII: return "AII";
    case Family::AIII: return "AIII";
    case Family::BDI: return "BDI";
    case Family::DIII: return "DIII";
    case Family::CI: return "CI";
    case Family::CII: return "CII";
    case Family::CUE: return "CUE";
    case Family::SO_odd: return "SO_odd";
    case Family::USp_group: return "USp_group";
    case Family::SO_even: return "SO_even";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  for (Family f : all_families())
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown family '" + s +
                              "' (expected AI, AII, AIII, BDI, DIII, CI, CII, CUE, SO_odd, USp_group, SO_even)");
}

class circular_ensemble_error : public std::invalid_argument {
 public:
  explicit circular_ensemble_error(Family f)
      : std::invalid_argument(to_string(f) + " is a circular ensemble and has no Jacobi parameters") {}
};

enum class Group { U, O, SO, USp };

// Family with rank R and offset L.  For two-parameter families M = R + L and
// N = R; for D III the offset selects N = 2R + L with L in {0, 1}.
struct EnsembleSpec {
  Family family = Family::AIII;
  int R = 1;
  int L = 0;

  static EnsembleSpec diii_from_N(int N) { return {Family::DIII, N / 2, N % 2}; }

  void validate() const {
    if (R < 1) throw std::invalid_argument("rank R must be at least 1");
    if (L < 0) throw std::invalid_argument("offset L must be nonnegative");
    switch (family) {
      case Family::AIII:
      case Family::BDI:
      case Family::CII:
        break;
      case Family::DIII:
        if (L > 1) throw std::invalid_argument("DIII: L must be 0 (N even) or 1 (N odd)");
        break;
      default:
        if (L != 0) throw std::invalid_argument(to_string(family) + " takes no offset L");
    }
  }

  int M() const { return R + L; }
  int N() const { return family == Family::DIII ? 2 * R + L : R; }

  // size of the matrices H
  int dim() const {
    switch (family) {
      case Family::AI:
      case Family::CUE: return R;
      case Family::AII:
      case Family::CI:
      case Family::USp_group:
      case Family::SO_even: return 2 * R;
      case Family::AIII:
      case Family::BDI: return M() + N();
      case Family::DIII: return 2 * N();
      case Family::CII: return 2 * (M() + N());
      case Family::SO_odd: return 2 * R + 1;
    }
    return 0;
  }

  Group group() const {
    switch (family) {
      case Family::AI:
      case Family::AII:
      case Family::AIII:
      case Family::CUE: return Group::U;
      case Family::BDI: return Group::O;
      case Family::DIII:
      case Family::SO_odd:
      case Family::SO_even: return Group::SO;
      case Family::CI:
      case Family::CII:
      case Family::USp_group: return Group::USp;
    }
    return Group::U;
  }

  bool circular() const { return family == Family::AI || family == Family::AII || family == Family::CUE; }

  // eigenvalues +1 forced by the structure of the torus
  int forced() const {
    switch (family) {
      case Family::AIII:
      case Family::BDI: return L;
      case Family::DIII:
      case Family::CII: return 2 * L;
      case Family::SO_odd: return 1;
      default: return 0;
    }
  }

  // 1: free eigenvalues in pairs lambda, conj(lambda); 2: in quadruples.
  // For A II it is the degeneracy of each eigenvalue.
  int pair_multiplicity() const {
    return (family == Family::AII || family == Family::DIII || family == Family::CII) ? 2 : 1;
  }
};

// ---------------------------------------------------------------- structure matrices

// J_n = [[0, -I], [I, 0]] as a complex matrix.
inline MatrixXcd J_matrix(Eigen::Index n) { return canonical_J(n).cast<cd>(); }

// I'_{MN} = diag(I_M, -I_N)
inline MatrixXcd Iprime(Eigen::Index m, Eigen::Index n) {
  Eigen::VectorXcd d(m + n);
  d.head(m).setOnes();
  d.tail(n).setConstant(-1.0);
  return d.asDiagonal();
}

// J'_n = [[0, I], [I, 0]]
inline MatrixXcd Jprime(Eigen::Index n) {
  MatrixXcd j = MatrixXcd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n).setIdentity();
  return j;
}

// diagonal of I'_{MN}
inline Eigen::VectorXd signature(Eigen::Index m, Eigen::Index n) {
  Eigen::VectorXd d(m + n);
  d.head(m).setOnes();
  d.tail(n).setConstant(-1.0);
  return d;
}

// diag(I'_{MN}, I'_{MN}), the signature matrix of C II
inline MatrixXcd Iprime_cii(Eigen::Index m, Eigen::Index n) {
  MatrixXcd s = MatrixXcd::Zero(2 * (m + n), 2 * (m + n));
  s.topLeftCorner(m + n, m + n) = Iprime(m, n);
  s.bottomRightCorner(m + n, m + n) = Iprime(m, n);
  return s;
}

// ---------------------------------------------------------------- Haar sampling

namespace detail {

inline MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols, bool complex_entries, Rng& rng) {
  std::normal_distribution<double> n01;
  MatrixXcd z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n01(rng);
      z(i, j) = complex_entries ? cd(re, n01(rng)) : cd(re, 0.0);
    }
  return z;
}

// Q of Z = QR normalized so diag(R) > 0, which makes Q Haar distributed.
inline MatrixXcd haar_from_qr(const MatrixXcd& z) {
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const cd d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

// Quaternionic Gram-Schmidt: columns j and j + n are v_j and J conj(v_j).
inline MatrixXcd haar_usp(Eigen::Index n, Rng& rng) {
  const MatrixXcd z = ginibre(2 * n, n, true, rng);
  const MatrixXcd j = J_matrix(n);
  MatrixXcd g(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd v = z.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index l = 0; l < k; ++l) {
        v -= g.col(l) * g.col(l).dot(v);
        v -= g.col(l + n) * g.col(l + n).dot(v);
      }
    }
    v.normalize();
    g.col(k) = v;
    g.col(k + n) = j * v.conjugate();
  }
  return g;
}

// J x and x J for J = [[0, -I], [I, 0]] without forming J
inline MatrixXcd J_left(const MatrixXcd& x) {
  const Eigen::Index n = x.rows() / 2;
  MatrixXcd y(x.rows(), x.cols());
  y.topRows(n) = -x.bottomRows(n);
  y.bottomRows(n) = x.topRows(n);
  return y;
}

inline MatrixXcd J_right(const MatrixXcd& x) {
  const Eigen::Index n = x.cols() / 2;
  MatrixXcd y(x.rows(), x.cols());
  y.leftCols(n) = x.rightCols(n);
  y.rightCols(n) = -x.leftCols(n);
  return y;
}

inline double unitarity_residual(const MatrixXcd& g) {
  return (g.adjoint() * g - MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

inline double symplectic_residual(const MatrixXcd& g) {
  return (J_right(g) * g.transpose() - J_matrix(g.rows() / 2)).cwiseAbs().maxCoeff();
}

inline double realness_residual(const MatrixXcd& g) { return g.imag().cwiseAbs().maxCoeff(); }

}  // namespace detail

// Haar-distributed element of U(size), O(size), SO(size) or USp(size); size
// is the matrix dimension and must be even for USp.
inline MatrixXcd haar_sample(Group group, int size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("haar_sample: size must be positive");
  switch (group) {
    case Group::U:
      return detail::haar_from_qr(detail::ginibre(size, size, true, rng));
    case Group::O:
    case Group::SO: {
      MatrixXcd q = detail::haar_from_qr(detail::ginibre(size, size, false, rng));
      q = q.real().cast<cd>();
      if (group == Group::SO && q.real().determinant() < 0.0) q.col(0) = -q.col(0);
      return q;
    }
    case Group::USp:
      if (size % 2 != 0) throw std::invalid_argument("haar_sample: USp needs an even size");
      return detail::haar_usp(size / 2, rng);
  }
  return {};
}

// Max residual of the defining identities of the group.
inline double group_residual(Group group, const MatrixXcd& g) {
  double r = detail::unitarity_residual(g);
  switch (group) {
    case Group::U:
      break;
    case Group::O:
      r = std::max(r, detail::realness_residual(g));
      break;
    case Group::SO:
      r = std::max(r, detail::realness_residual(g));
      r = std::max(r, std::abs(g.real().determinant() - 1.0));
      break;
    case Group::USp:
      if (g.rows() % 2 != 0) return INFINITY;
      r = std::max(r, detail::symplectic_residual(g));
      break;
  }
  return r;
}

// ---------------------------------------------------------------- realizations

// Max residual of the identities defining the family's matrix ensemble.
inline double membership_residual(const EnsembleSpec& spec, const MatrixXcd& h) {
  const auto m = spec.M(), n = spec.N();
  double r = detail::unitarity_residual(h);
  auto herm = [](const MatrixXcd& x) { return (x - x.adjoint()).cwiseAbs().maxCoeff(); };
  switch (spec.family) {
    case Family::AI:
      r = std::max(r, (h - h.transpose()).cwiseAbs().maxCoeff());
      break;
    case Family::AII: {
      const MatrixXcd j = J_matrix(spec.R);
      r = std::max(r, (h - j * h.transpose() * j.transpose()).cwiseAbs().maxCoeff());
      break;
    }
    case Family::AIII:
    case Family::BDI: {
      // H I' is Hermitian (symmetric for BD I) of signature (M, N)
      const MatrixXcd g = h * Iprime(m, n);
      r = std::max(r, herm(g));
      r = std::max(r, std::abs(g.trace() - cd(double(m - n))));
      if (spec.family == Family::BDI) r = std::max(r, detail::realness_residual(h));
      break;
    }
    case Family::DIII: {
      const MatrixXcd j = J_matrix(n);
      const MatrixXcd g = h * j;
      r = std::max(r, detail::realness_residual(h));
      r = std::max(r, (g + g.transpose()).cwiseAbs().maxCoeff());
      // dexter: Pf(H J) = Pf(J)
      const Eigen::MatrixXd gr = g.real();
      const Eigen::MatrixXd ga = 0.5 * (gr - gr.transpose());
      r = std::max(r, std::abs(pfaffian(ga) - pfaffian(canonical_J(n))));
      break;
    }
    case Family::CI: {
      // G = H I' is Hermitian with J G = -conj(G) J
      const MatrixXcd j = J_matrix(spec.R);
      const MatrixXcd g = h * Iprime(spec.R, spec.R);
      r = std::max(r, herm(g));
      r = std::max(r, (j * g + g.conjugate() * j).cwiseAbs().maxCoeff());
      break;
    }
    case Family::CII: {
      const MatrixXcd g = h * Iprime_cii(m, n);
      r = std::max(r, herm(g));
      r = std::max(r, detail::symplectic_residual(h));
      r = std::max(r, std::abs(g.trace() - cd(2.0 * double(m - n))));
      break;
    }
    case Family::CUE:
      break;
    case Family::SO_odd:
    case Family::SO_even:
      r = std::max(r, group_residual(Group::SO, h));
      break;
    case Family::USp_group:
      r = std::max(r, detail::symplectic_residual(h));
      break;
  }
  return r;
}

// H = g Omega(g)^{-1}; type II families return g itself.
inline MatrixXcd realize(const EnsembleSpec& spec, const MatrixXcd& g) {
  spec.validate();
  const int d = spec.dim();
  if (g.rows() != d || g.cols() != d) {
    throw std::invalid_argument("realize: " + to_string(spec.family) + " needs a " + std::to_string(d) + "x" +
                                std::to_string(d) + " group element");
  }
  if (group_residual(spec.group(), g) > 1e-8) {
    throw std::invalid_argument("realize: element is not in the group of " + to_string(spec.family));
  }
  const auto m = spec.M(), n = spec.N();
  switch (spec.family) {
    case Family::AI:
      return g * g.transpose();
    case Family::AII: {
      const MatrixXcd j = J_matrix(spec.R);
      return g * (j * g.transpose() * j.transpose());
    }
    case Family::AIII:
    case Family::BDI:
    case Family::CI:
    case Family::CII: {
      // g I' g^dagger I' with I' diagonal
      Eigen::VectorXd d = signature(m, n);
      if (spec.family == Family::CI) d = signature(spec.R, spec.R);
      if (spec.family == Family::CII) {
        d.resize(2 * (m + n));
        d << signature(m, n), signature(m, n);
      }
      const auto ds = d.cast<cd>().asDiagonal();
      return (g * ds * g.adjoint()) * ds;
    }
    case Family::DIII:
      // g J^T g^T J, and J^T = -J
      return detail::J_right(-detail::J_right(g) * g.transpose());
    default:
      return g;
  }
}

// ---------------------------------------------------------------- spectra

struct SpectrumSample {
  std::vector<double> thetas;  // R angles, [0, pi] (Jacobi families) or [0, 2 pi) (circular)
  std::vector<double> levels;  // cos theta
  int forced = 0;              // number of +1 eigenvalues removed
  int pair_multiplicity = 1;
  int degenerate = 0;          // near-collisions between distinct groups
};

namespace detail {

inline double wrap_2pi(double t) {
  t = std::fmod(t, 2.0 * pi);
  return t < 0.0 ? t + 2.0 * pi : t;
}

inline double circular_gap(double x, double y) {
  const double d = std::abs(x - y);
  return std::min(d, 2.0 * pi - d);
}

inline void fail_grouping(const EnsembleSpec& spec, double spread) {
  throw std::runtime_error("spectrum: eigenvalues of " + to_string(spec.family) +
                           " do not group consistently (spread " + std::to_string(spread) + ")");
}

}  // namespace detail

inline constexpr double group_tolerance = 1e-6;

namespace detail {

// Eigenangles of a unitary matrix: full phases in (-pi, pi] when circular,
// otherwise |arg| from the Hermitian part (H + H^dagger) / 2, whose
// eigenvalues are the cos of the phases (H is normal).
inline std::vector<double> eigenangles(const MatrixXcd& h, bool circular, bool real) {
  if (unitarity_residual(h) > 1e-8) throw std::runtime_error("spectrum: matrix is not unitary");
  std::vector<double> phi;
  phi.reserve(h.rows());
  if (circular) {
    Eigen::ComplexEigenSolver<MatrixXcd> es(h, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    for (Eigen::Index i = 0; i < h.rows(); ++i) phi.push_back(std::arg(es.eigenvalues()(i)));
    return phi;
  }
  Eigen::VectorXd c;
  if (real) {
    const Eigen::MatrixXd hr = h.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hr + hr.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    c = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    c = es.eigenvalues();
  }
  for (Eigen::Index i = 0; i < c.size(); ++i) phi.push_back(std::acos(std::clamp(c(i), -1.0, 1.0)));
  return phi;
}

}  // namespace detail

inline SpectrumSample spectrum(const EnsembleSpec& spec, const MatrixXcd& h) {
  spec.validate();
  const bool real = spec.family == Family::BDI || spec.family == Family::DIII || spec.family == Family::SO_odd ||
                    spec.family == Family::SO_even;
  if (real && detail::realness_residual(h) > 1e-8) throw std::runtime_error("spectrum: matrix is not real");
  std::vector<double> phi = detail::eigenangles(h, spec.circular(), real);

  SpectrumSample s;
  s.forced = spec.forced();
  s.pair_multiplicity = spec.pair_multiplicity();

  if (spec.circular()) {
    for (double& p : phi) p = detail::wrap_2pi(p);
    std::sort(phi.begin(), phi.end());
    if (spec.family != Family::AII) {
      s.thetas = phi;
    } else {
      // doubly degenerate: pair neighbours, trying both alignments on the circle
      const std::size_t n = phi.size();
      auto spread_of = [&](std::size_t off) {
        double w = 0.0;
        for (std::size_t k = 0; k < n; k += 2)
          w = std::max(w, detail::circular_gap(phi[(k + off) % n], phi[(k + off + 1) % n]));
        return w;
      };
      const double w0 = spread_of(0), w1 = spread_of(1);
      const std::size_t off = w1 < w0 ? 1 : 0;
      if (std::min(w0, w1) > group_tolerance) detail::fail_grouping(spec, std::min(w0, w1));
      for (std::size_t k = 0; k < n; k += 2) {
        const double x = phi[(k + off) % n], y = phi[(k + off + 1) % n];
        const double mid = std::arg(std::polar(1.0, x) + std::polar(1.0, y));
        s.thetas.push_back(detail::wrap_2pi(mid));
      }
      std::sort(s.thetas.begin(), s.thetas.end());
    }
  } else {
    for (double& p : phi) p = std::abs(p);
    std::sort(phi.begin(), phi.end());
    for (int k = 0; k < s.forced; ++k) {
      if (phi[k] > group_tolerance) {
        throw std::runtime_error("spectrum: " + to_string(spec.family) + " is missing forced eigenvalues +1");
      }
    }
    const int group = 2 * s.pair_multiplicity;
    const auto first = static_cast<std::size_t>(s.forced);
    if ((phi.size() - first) != static_cast<std::size_t>(group * spec.R)) detail::fail_grouping(spec, INFINITY);
    for (std::size_t k = first; k < phi.size(); k += group) {
      const double w = phi[k + group - 1] - phi[k];
      if (w > group_tolerance) detail::fail_grouping(spec, w);
      double sum = 0.0;
      for (int i = 0; i < group; ++i) sum += phi[k + i];
      s.thetas.push_back(sum / group);
    }
  }
  for (std::size_t k = 1; k < s.thetas.size(); ++k)
    if (s.thetas[k] - s.thetas[k - 1] < group_tolerance) ++s.degenerate;
  s.levels.reserve(s.thetas.size());
  for (double t : s.thetas) s.levels.push_back(std::cos(t));
  return s;
}

// One full draw: Haar element, realization, spectrum.
inline SpectrumSample draw_spectrum(const EnsembleSpec& spec, Rng& rng) {
  return spectrum(spec, realize(spec, haar_sample(spec.group(), spec.dim(), rng)));
}

// count draws; draw i uses substream(seed, i), so the output does not depend
// on the number of threads (0 means all cores).
inline std::vector<SpectrumSample> sample_spectra(const EnsembleSpec& spec, std::size_t count,
                                                  std::uint64_t seed, unsigned threads = 0) {
  spec.validate();
  std::vector<SpectrumSample> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        Rng rng = substream(seed, i);
        out[i] = draw_spectrum(spec, rng);
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

// ---------------------------------------------------------------- root data

enum class RootKind { difference, sum, single, twice };  // theta_k - theta_j, theta_k + theta_j, theta_j, 2 theta_j

struct Root {
  RootKind kind;
  double multiplicity;
};

struct RootSystem {
  std::vector<Root> roots;

  double multiplicity(RootKind k) const {
    for (const Root& r : roots)
      if (r.kind == k) return r.multiplicity;
    return 0.0;
  }
};

// Positive roots and multiplicities.  For the groups (type II) every root of
// the group counts with multiplicity 2.
inline RootSystem root_system(const EnsembleSpec& spec) {
  const double L = spec.L;
  using K = RootKind;
  switch (spec.family) {
    case Family::AI: return {{{K::difference, 1}}};
    case Family::AII: return {{{K::difference, 4}}};
    case Family::CUE: return {{{K::difference, 2}}};
    case Family::AIII: return {{{K::difference, 2}, {K::sum, 2}, {K::single, 2 * L}, {K::twice, 1}}};
    case Family::BDI: return {{{K::difference, 1}, {K::sum, 1}, {K::single, L}}};
    case Family::DIII:
      if (spec.L == 0) return {{{K::difference, 4}, {K::sum, 4}, {K::twice, 1}}};
      return {{{K::difference, 4}, {K::sum, 4}, {K::single, 4}, {K::twice, 1}}};
    case Family::CI: return {{{K::difference, 1}, {K::sum, 1}, {K::twice, 1}}};
    case Family::CII: return {{{K::difference, 4}, {K::sum, 4}, {K::single, 4 * L}, {K::twice, 3}}};
    case Family::SO_odd: return {{{K::difference, 2}, {K::sum, 2}, {K::single, 2}}};
    case Family::USp_group: return {{{K::difference, 2}, {K::sum, 2}, {K::twice, 2}}};
    case Family::SO_even: return {{{K::difference, 2}, {K::sum, 2}}};
  }
  return {};
}

// prod over positive roots of |sin(alpha(Theta)/2)|^{m_alpha}
inline double weyl_density(const EnsembleSpec& spec, const std::vector<double>& thetas) {
  const RootSystem rs = root_system(spec);
  double logd = 0.0;
  auto add = [&](double m, double arg) {
    if (m == 0.0) return;
    const double s = std::abs(std::sin(0.5 * arg));
    if (s == 0.0) {
      logd = -INFINITY;
      return;
    }
    logd += m * std::log(s);
  };
  const std::size_t n = thetas.size();
  for (const Root& r : rs.roots) {
    switch (r.kind) {
      case RootKind::difference:
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t j = 0; j < k; ++j) add(r.multiplicity, thetas[k] - thetas[j]);
        break;
      case RootKind::sum:
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t j = 0; j < k; ++j) add(r.multiplicity, thetas[k] + thetas[j]);
        break;
      case RootKind::single:
        for (double t : thetas) add(r.multiplicity, t);
        break;
      case RootKind::twice:
        for (double t : thetas) add(r.multiplicity, 2.0 * t);
        break;
    }
  }
  return std::exp(logd);
}

// (beta, a, b) of the Jacobi measure of the family's levels.
inline JacobiParams table_params(const EnsembleSpec& spec) {
  spec.validate();
  const double L = spec.L;
  switch (spec.family) {
    case Family::AIII: return JacobiParams::unitary(L, 0.0);
    case Family::BDI: return JacobiParams::orthogonal(0.5 * (L - 1.0), -0.5);
    case Family::DIII: return JacobiParams::symplectic(spec.L == 0 ? 0.0 : 2.0, 0.0);
    case Family::CI: return JacobiParams::orthogonal(0.0, 0.0);
    case Family::CII: return JacobiParams::symplectic(2.0 * L + 1.0, 1.0);
    case Family::SO_odd: return JacobiParams::unitary(0.5, -0.5);
    case Family::USp_group: return JacobiParams::unitary(0.5, 0.5);
    case Family::SO_even: return JacobiParams::unitary(-0.5, -0.5);
    default: throw circular_ensemble_error(spec.family);
  }
}

inline int circular_beta(const EnsembleSpec& spec) {
  switch (spec.family) {
    case Family::AI: return 1;
    case Family::CUE: return 2;
    case Family::AII: return 4;
    default: throw std::invalid_argument(to_string(spec.family) + " is not a circular ensemble");
  }
}

// Jacobi measure written in the angles (including the Jacobian sin theta):
//   |Van(cos Theta)|^beta prod (1 - cos)^{a+1/2} (1 + cos)^{b+1/2},
// and |Van(e^{i Theta})|^beta for the circular families.
inline double jacobi_form_density(const EnsembleSpec& spec, const std::vector<double>& thetas) {
  const std::size_t n = thetas.size();
  double logd = 0.0;
  if (spec.circular()) {
    const int beta = circular_beta(spec);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < k; ++j)
        logd += beta * std::log(std::abs(std::polar(1.0, thetas[k]) - std::polar(1.0, thetas[j])));
    return std::exp(logd);
  }
  const JacobiParams p = table_params(spec);
  // half-angle forms of x_k - x_j and 1 -+ x avoid cancellation near the edges
  for (std::size_t k = 0; k < n; ++k) {
    const double t = thetas[k];
    for (std::size_t j = 0; j < k; ++j)
      logd += p.beta * std::log(std::abs(2.0 * std::sin(0.5 * (t + thetas[j])) * std::sin(0.5 * (t - thetas[j]))));
    logd += (p.a + 0.5) * std::log(2.0 * std::pow(std::sin(0.5 * t), 2)) +
            (p.b + 0.5) * std::log(2.0 * std::pow(std::cos(0.5 * t), 2));
  }
  return std::exp(logd);
}

// ---------------------------------------------------------------- MCMC

struct McmcResult {
  std::vector<std::vector<double>> samples;  // each of size R
  double acceptance = 0.0;                   // after burn-in
  double window = 0.0;                       // tuned proposal half-width
};

// Single-coordinate Metropolis for the density
//   prod |x_j - x_k|^beta prod (1 - x_j)^a (1 + x_j)^b on [-1, 1]^R,
// uniform window proposals reflected at +-1, the window tuned during burn_in
// sweeps towards 40% acceptance, and 5 R coordinate updates between kept samples.
inline McmcResult mcmc_jacobi(int R, double beta, double a, double b, std::size_t n_samples,
                              std::size_t burn_in, Rng& rng) {
  if (R < 1) throw std::invalid_argument("mcmc_jacobi: R must be at least 1");
  if (!(beta > 0.0)) throw std::invalid_argument("mcmc_jacobi: beta must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("mcmc_jacobi: a and b must exceed -1");

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, R - 1);
  std::vector<double> x(R);
  // start from the Chebyshev points, which are distinct and interior
  for (int j = 0; j < R; ++j) x[j] = std::cos(pi * (j + 0.5) / R);

  auto log_site = [&](int j, double y) {
    double s = a * std::log1p(-y) + b * std::log1p(y);
    for (int k = 0; k < R; ++k)
      if (k != j) s += beta * std::log(std::abs(y - x[k]));
    return s;
  };

  double w = 0.5;
  std::size_t accepted = 0, proposed = 0;
  auto update = [&] {
    const int j = pick(rng);
    double y = x[j] + w * (2.0 * u01(rng) - 1.0);
    while (y > 1.0 || y < -1.0) y = y > 1.0 ? 2.0 - y : -2.0 - y;
    ++proposed;
    if (!(std::abs(y) < 1.0)) return;
    const double d = log_site(j, y) - log_site(j, x[j]);
    if (d >= 0.0 || u01(rng) < std::exp(d)) {
      x[j] = y;
      ++accepted;
    }
  };

  constexpr std::size_t batch = 50;
  for (std::size_t sweep = 0; sweep < burn_in; ++sweep) {
    for (int i = 0; i < R; ++i) update();
    if ((sweep + 1) % batch == 0) {
      const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
      w = std::clamp(w * std::exp(2.0 * (rate - 0.4)), 1e-6, 2.0);
      accepted = proposed = 0;
    }
  }
  accepted = proposed = 0;

  McmcResult res;
  res.samples.reserve(n_samples);
  const int thin = 5 * R;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (int i = 0; i < thin; ++i) update();
    res.samples.push_back(x);
  }
  res.acceptance = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  res.window = w;
  return res;
}

}  // namespace symrmt
