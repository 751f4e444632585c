#include "dln/nullspace.hpp"

#include "dln/errors.hpp"
#include "dln/lp.hpp"
#include "dln/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <string>

namespace dln {
namespace {

Matrix rows_of(const Matrix& m, const IndexSet& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = m.row(idx[k]);
  return out;
}

SubspaceBasis span_in(const SubspaceBasis& outer, const SubspaceBasis& coeffs) {
  if (coeffs.is_empty()) return SubspaceBasis::empty(outer.ambient_dim);
  return orthonormalize(outer.vectors * coeffs.vectors);
}

// The search space written through m = n_{S^c}: n_S = map * m, with m
// restricted to range(B_{S^c}) by the rows of `perp`.
struct Reduced {
  Matrix map;   // |S| x |S^c|
  Matrix perp;  // (|S^c| - k) x |S^c|
  Matrix lift;  // d-vector n from m: d x |S^c|
};

Reduced reduce(const SubspaceBasis& search, const IndexSet& support, const IndexSet& off) {
  const Matrix bs = rows_of(search.vectors, support);
  const Matrix bc = rows_of(search.vectors, off);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(bc);
  if (cod.rank() < bc.cols()) {
    throw DegenerateSupport("a nonzero search vector vanishes on S^c");
  }
  const Matrix pinv = cod.pseudoInverse();  // k x |S^c|
  Reduced r;
  r.map = bs * pinv;
  r.lift = search.vectors * pinv;
  const SubspaceBasis perp = kernel_basis(bc.transpose());
  r.perp = perp.vectors.transpose();
  return r;
}

// max w^T m over {m in range(B_{S^c}), |m|_1 <= 1}; returns (value, m).
std::pair<double, Vector> ball_lp(const Reduced& red, const Vector& w, LpSolver& solver) {
  const Eigen::Index c = red.map.cols();
  const Eigen::Index rows = red.perp.rows() + 1;
  Matrix eq = Matrix::Zero(rows, 2 * c + 1);
  eq.block(0, 0, red.perp.rows(), c) = red.perp;
  eq.block(0, c, red.perp.rows(), c) = -red.perp;
  eq.row(rows - 1).setOnes();
  Vector rhs = Vector::Zero(rows);
  rhs(rows - 1) = 1.0;
  Vector obj = Vector::Zero(2 * c + 1);
  obj.head(c) = -w;
  obj.segment(c, c) = w;
  const LpResult r = solver.solve(LpProblem::nonnegative(obj, eq, rhs));
  Vector m = r.x.head(c) - r.x.segment(c, c);
  // Project back onto range(B_{S^c}) to remove solver noise.
  if (red.perp.rows() > 0) m -= red.perp.transpose() * (red.perp * m);
  return {w.dot(m), m};
}

double rho_of(const Vector& ns, const Vector& sign_s) { return -sign_s.dot(ns); }

double rho_minus_of(const Vector& ns, const Vector& sign_s) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < ns.size(); ++i) s += std::max(0.0, -sign_s(i) * ns(i));
  return s;
}

}  // namespace

SubspaceBasis tangent_basis(const SubspaceBasis& kernel, const IndexSet& support, const SignVector& sign) {
  const int d = kernel.ambient_dim;
  if (kernel.is_empty()) return SubspaceBasis::empty(d);
  const IndexSet off = complement(support, d);
  Matrix cons(1 + static_cast<Eigen::Index>(off.size()), kernel.dim());
  cons.row(0).setZero();
  for (int i : support) cons.row(0) += static_cast<double>(sign(i)) * kernel.vectors.row(i);
  for (std::size_t k = 0; k < off.size(); ++k) cons.row(1 + static_cast<Eigen::Index>(k)) = kernel.vectors.row(off[k]);
  return span_in(kernel, kernel_basis(cons));
}

SubspaceBasis complement_basis(const SubspaceBasis& kernel, const SubspaceBasis& tangent,
                               const Vector& gstar, const IndexSet& support, double weight_exponent) {
  const int d = kernel.ambient_dim;
  if (kernel.is_empty()) return SubspaceBasis::empty(d);
  if (tangent.is_empty()) return kernel;
  Vector weight = Vector::Zero(d);
  for (int i : support) {
    const double g = std::abs(gstar(i));
    if (g <= 1e-14) throw DegenerateWeights("g*_" + std::to_string(i) + " vanishes on the support");
    weight(i) = std::pow(g, -weight_exponent);
  }
  const Matrix cons = tangent.vectors.transpose() * weight.asDiagonal() * kernel.vectors;
  return span_in(kernel, kernel_basis(cons));
}

double weight_exponent_for_depth(int depth) {
  if (depth == 2) return 1.0;
  return 1.0 + static_cast<double>(depth - 2) / depth;
}

Decomposition decompose(const Matrix& a, const IndexSet& support, const SignVector& sign,
                        const Vector& gstar, int depth) {
  Decomposition dec;
  dec.weight_exponent = weight_exponent_for_depth(depth);
  dec.kernel = kernel_basis(a);
  dec.tangent = tangent_basis(dec.kernel, support, sign);
  dec.complement = complement_basis(dec.kernel, dec.tangent, gstar, support, dec.weight_exponent);
  return dec;
}

double condition_number(const Vector& gstar, const IndexSet& support) {
  if (support.empty()) return 1.0;
  double lo = kInf;
  double hi = 0.0;
  for (int i : support) {
    lo = std::min(lo, std::abs(gstar(i)));
    hi = std::max(hi, std::abs(gstar(i)));
  }
  return hi / lo;
}

NspConstants compute_constants(const SubspaceBasis& search, const IndexSet& support,
                               const SignVector& sign, const Vector& gstar, int cap, int threads) {
  const int d = search.ambient_dim;
  NspConstants out;
  out.kappa_star = condition_number(gstar, support);
  out.attainer_rho = Vector::Zero(d);
  if (search.is_empty()) return out;
  if (support.empty()) throw InvalidParameters("support must be nonempty");
  const IndexSet off = complement(support, d);
  if (off.empty()) throw DegenerateSupport("S^c is empty");
  const Reduced red = reduce(search, support, off);
  const Eigen::Index ns = static_cast<Eigen::Index>(support.size());
  Vector sign_s(ns);
  for (Eigen::Index k = 0; k < ns; ++k) sign_s(k) = sign(support[static_cast<std::size_t>(k)]);

  auto normalise = [&](const Vector& m) {
    const double l1 = m.lpNorm<1>();
    return l1 > 0.0 ? Vector(m / l1) : m;
  };

  // rho: one LP with w = -map^T sign_S.
  {
    LpSolver solver;
    const Vector w = -red.map.transpose() * sign_s;
    auto [value, m] = ball_lp(red, w, solver);
    Vector mm = normalise(m);
    if (mm.lpNorm<1>() == 0.0) {
      mm = normalise(Vector(red.lift.transpose() * Vector::Ones(d)));  // any nonzero member
      if (mm.lpNorm<1>() == 0.0) mm = normalise(rows_of(search.vectors, off).col(0));
    }
    out.attainer_rho = red.lift * mm;
    out.rho = std::max(0.0, rho_of(red.map * mm, sign_s));
    (void)value;
  }

  auto pattern_value = [&](const Vector& weights_on_s, LpSolver& solver) {
    const Vector w = red.map.transpose() * weights_on_s;
    return ball_lp(red, w, solver);
  };

  if (ns <= cap) {
    const long tilde_count = 1L << (ns - 1);  // s and -s give the same value
    const long minus_count = 1L << ns;
    std::vector<double> tilde(static_cast<std::size_t>(tilde_count), 0.0);
    std::vector<double> minus(static_cast<std::size_t>(minus_count), 0.0);
    parallel_for(static_cast<int>(tilde_count + minus_count), threads, [&](int task) {
      LpSolver solver;
      Vector weights(ns);
      if (task < tilde_count) {
        for (Eigen::Index k = 0; k < ns; ++k) weights(k) = ((task >> k) & 1) ? -1.0 : 1.0;
        const Vector m = normalise(pattern_value(weights, solver).second);
        tilde[static_cast<std::size_t>(task)] = (red.map * m).lpNorm<1>();
      } else {
        const long z = task - tilde_count;
        if (z == 0) return;
        for (Eigen::Index k = 0; k < ns; ++k) weights(k) = ((z >> k) & 1) ? -sign_s(k) : 0.0;
        const Vector m = normalise(pattern_value(weights, solver).second);
        minus[static_cast<std::size_t>(z)] = rho_minus_of(red.map * m, sign_s);
      }
    });
    out.rho_tilde = *std::max_element(tilde.begin(), tilde.end());
    out.rho_minus = *std::max_element(minus.begin(), minus.end());
  } else {
    // Pattern ascent: solve for a pattern, re-read the pattern off the
    // maximiser, repeat until it is stable. Every value is attained, so the
    // maximum over starts is a lower bound.
    out.exact = false;
    const int starts = 100;
    std::vector<double> tilde(starts, 0.0), minus(starts, 0.0);
    parallel_for(starts, threads, [&](int start) {
      std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + static_cast<unsigned>(start));
      std::bernoulli_distribution coin(0.5);
      LpSolver solver;
      Vector weights(ns);
      for (Eigen::Index k = 0; k < ns; ++k) weights(k) = coin(rng) ? 1.0 : -1.0;
      for (int step = 0; step < 50; ++step) {
        const Vector ns_vec = red.map * normalise(pattern_value(weights, solver).second);
        tilde[static_cast<std::size_t>(start)] = std::max(tilde[static_cast<std::size_t>(start)], ns_vec.lpNorm<1>());
        Vector next(ns);
        for (Eigen::Index k = 0; k < ns; ++k) next(k) = ns_vec(k) >= 0.0 ? 1.0 : -1.0;
        if (next == weights) break;
        weights = next;
      }
      for (Eigen::Index k = 0; k < ns; ++k) weights(k) = coin(rng) ? -sign_s(k) : 0.0;
      for (int step = 0; step < 50; ++step) {
        const Vector ns_vec = red.map * normalise(pattern_value(weights, solver).second);
        minus[static_cast<std::size_t>(start)] = std::max(minus[static_cast<std::size_t>(start)], rho_minus_of(ns_vec, sign_s));
        Vector next(ns);
        for (Eigen::Index k = 0; k < ns; ++k) next(k) = -sign_s(k) * ns_vec(k) > 0.0 ? -sign_s(k) : 0.0;
        if (next == weights) break;
        weights = next;
      }
    });
    out.rho_tilde = *std::max_element(tilde.begin(), tilde.end());
    out.rho_minus = *std::max_element(minus.begin(), minus.end());
  }
  // Both are suprema over sets that contain the rho maximiser.
  out.rho_minus = std::max(out.rho_minus, out.rho);
  out.rho_tilde = std::max(out.rho_tilde, out.rho_minus);
  return out;
}

}  // namespace dln
