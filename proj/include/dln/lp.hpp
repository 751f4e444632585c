#pragma once

#include "dln/linalg.hpp"

#include <limits>

namespace dln {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c^T x  subject to  eq_matrix x = eq_rhs,  lower <= x <= upper.
/// Bounds may be infinite.
struct LpProblem {
  Vector objective;
  Matrix eq_matrix;
  Vector eq_rhs;
  Vector lower;
  Vector upper;

  /// All variables in [0, +inf).
  static LpProblem nonnegative(Vector c, Matrix a, Vector b);
  int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, MaxIterations };

struct LpResult {
  Vector x;
  double objective_value = 0.0;
  LpStatus status = LpStatus::Optimal;
  double primal_residual = 0.0;  // |A x - b| / (1 + |b|)
  double dual_residual = 0.0;    // |A^T l + s - c| / (1 + |c|)
  double gap = 0.0;              // |c^T x - b^T l| / (1 + |c^T x|)
  int iterations = 0;
};

struct LpOptions {
  double tol = 1e-9;
  int max_iterations = 200;
};

/// Dense Mehrotra predictor-corrector interior point method. Holds its
/// factorisation workspace, so one instance serves one thread at a time.
class LpSolver {
 public:
  explicit LpSolver(LpOptions options = {}) : options_(options) {}

  /// Throws Infeasible or Unbounded when detected; an iteration cap returns
  /// the best iterate with status MaxIterations.
  LpResult solve(const LpProblem& problem);

 private:
  LpOptions options_;
  Matrix normal_;
  Eigen::LLT<Matrix> chol_;
};

LpResult solve_lp(const LpProblem& problem, double tol = 1e-9);

}  // namespace dln
