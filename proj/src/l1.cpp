#include "dln/l1.hpp"

#include "dln/errors.hpp"
#include "dln/lp.hpp"
#include "dln/parallel.hpp"

#include <cmath>
#include <string>

namespace dln {
namespace {

double support_threshold(double value) { return 1e-7 * (1.0 + value); }

// Variables (p, q, slack) >= 0 with A(p - q) = y and sum(p + q) + slack = radius.
LpProblem ball_problem(const Matrix& a, const Vector& y, double radius) {
  const Eigen::Index n = a.rows();
  const Eigen::Index d = a.cols();
  Matrix eq = Matrix::Zero(n + 1, 2 * d + 1);
  eq.block(0, 0, n, d) = a;
  eq.block(0, d, n, d) = -a;
  eq.row(n).setOnes();
  Vector rhs(n + 1);
  rhs << y, radius;
  return LpProblem::nonnegative(Vector::Zero(2 * d + 1), std::move(eq), std::move(rhs));
}

}  // namespace

L1Certificate basis_pursuit(const Matrix& a, const Vector& y, double tol) {
  if (a.rows() != y.size()) throw InvalidDims("A has " + std::to_string(a.rows()) + " rows, y has " +
                                              std::to_string(y.size()) + " entries");
  least_norm_solution(a, y);  // throws Infeasible when A x = y has no solution
  const Eigen::Index d = a.cols();
  L1Certificate cert;
  if (y.norm() == 0.0) {
    cert.minimizer = Vector::Zero(d);
    cert.sign = SignVector::Zero(d);
    return cert;
  }
  Matrix eq(a.rows(), 2 * d);
  eq << a, -a;
  LpResult r = solve_lp(LpProblem::nonnegative(Vector::Ones(2 * d), eq, y), tol);
  cert.minimizer = r.x.head(d) - r.x.tail(d);
  cert.value = cert.minimizer.lpNorm<1>();
  cert.sign = SignVector::Zero(d);
  const double thr = support_threshold(cert.value);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(cert.minimizer(i)) > thr) {
      cert.support.push_back(static_cast<int>(i));
      cert.sign(i) = cert.minimizer(i) > 0.0 ? 1 : -1;
    }
  }
  return cert;
}

SupportSign support_and_sign(const Matrix& a, const Vector& y, double value, int threads) {
  const int d = static_cast<int>(a.cols());
  // The optimal value is known to LP accuracy only; widen the ball slightly so
  // the polytope stays nonempty.
  const double radius = value * (1.0 + 1e-9) + 1e-12;
  const LpProblem base = ball_problem(a, y, radius);
  SupportSign out;
  out.lowest = Vector::Zero(d);
  out.highest = Vector::Zero(d);
  parallel_for(2 * d, threads, [&](int task) {
    const int i = task / 2;
    const double dir = (task % 2 == 0) ? 1.0 : -1.0;  // maximize dir * x_i
    LpProblem p = base;
    p.objective(i) = -dir;
    p.objective(d + i) = dir;
    LpSolver solver;
    const LpResult r = solver.solve(p);
    const double xi = r.x(i) - r.x(d + i);
    if (dir > 0.0) {
      out.highest(i) = xi;
    } else {
      out.lowest(i) = xi;
    }
  });
  const double thr = support_threshold(value);
  out.sign = SignVector::Zero(d);
  out.unique = true;
  for (int i = 0; i < d; ++i) {
    const bool pos = out.highest(i) > thr;
    const bool neg = out.lowest(i) < -thr;
    if (pos && neg) {
      throw SignConflict("coordinate " + std::to_string(i) + " takes both signs on L_min");
    }
    if (pos || neg) {
      out.support.push_back(i);
      out.sign(i) = pos ? 1 : -1;
    }
    if (out.highest(i) - out.lowest(i) > thr) out.unique = false;
  }
  return out;
}

L1Certificate certify_l1(const Matrix& a, const Vector& y, int threads) {
  L1Certificate cert = basis_pursuit(a, y);
  if (cert.value == 0.0) {
    cert.unique = true;
    cert.support_is_lmin_support = true;
    return cert;
  }
  SupportSign ss = support_and_sign(a, y, cert.value, threads);
  cert.support = ss.support;
  cert.sign = ss.sign;
  cert.unique = ss.unique;
  cert.support_is_lmin_support = true;
  if (cert.unique) {
    Matrix as(a.rows(), static_cast<Eigen::Index>(ss.support.size()));
    for (std::size_t k = 0; k < ss.support.size(); ++k) as.col(static_cast<Eigen::Index>(k)) = a.col(ss.support[k]);
    if (numerical_rank(as) == as.cols()) {
      const Vector xs = as.completeOrthogonalDecomposition().solve(y);
      Vector refined = Vector::Zero(a.cols());
      bool consistent = true;
      for (std::size_t k = 0; k < ss.support.size(); ++k) {
        refined(ss.support[k]) = xs(static_cast<Eigen::Index>(k));
        if (refined(ss.support[k]) * ss.sign(ss.support[k]) <= 0.0) consistent = false;
      }
      if (consistent && (as * xs - y).norm() <= 1e-10 * (1.0 + y.norm())) {
        cert.minimizer = refined;
      }
    }
    cert.value = cert.minimizer.lpNorm<1>();
  }
  return cert;
}

}  // namespace dln
