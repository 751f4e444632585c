#pragma once

#include "dln/linalg.hpp"
#include "dln/potentials.hpp"

#include <utility>
#include <vector>

namespace dln {

struct SolveConfig {
  double step_init = 0.0;  // 0 selects the automatic rule
  double step_min = 1e-18;
  double loss_tol = 1e-5;
  long max_iters = 5'000'000;
  int record_every = 1000;
  /// After the loss test passes, continue with Newton steps on the dual
  /// variable (z = A^T lambda) until the residual stops decreasing.
  bool newton_polish = false;
};

struct SolveTrace {
  Vector final_x;
  double final_loss = 0.0;
  long iterations = 0;
  std::vector<std::pair<long, double>> loss_history;
  bool converged = false;
  bool polished = false;
};

/// |y - A x|_2^2
double squared_loss(const Matrix& a, const Vector& y, const Vector& x);

/// Mirror descent on the squared loss with potential p, started at z = 0.
SolveTrace mirror_descent(const Matrix& a, const Vector& y, const Potential& p,
                          const SolveConfig& cfg = {});

/// Bregman projection of 0 onto {A x = y} when ker A is one-dimensional:
/// g0 + t n with <grad F(g0 + t n), n> = 0.
Vector bregman_1d_oracle(const Matrix& a, const Vector& y, const Potential& p, const Vector& g0);

/// Gradient descent on (u, v) for x = u^D - v^D, started at u = v = alpha^{1/D}.
SolveTrace factored_gd(const Matrix& a, const Vector& y, int depth, double alpha,
                       const SolveConfig& cfg = {});

enum class Selection { ShallowEntropy, DeepPower };

/// L_min = {A x = y, sign (.) x >= 0, <sign, x> = value}, with x zero off the support.
struct LminPolytope {
  Matrix a;
  Vector y;
  IndexSet support;
  SignVector sign;
  double value = 0.0;
};

struct FrankWolfeResult {
  Vector x;
  long iterations = 0;
  double gap = 0.0;
};

/// Frank-Wolfe with an LP oracle, followed by a Newton polish on the affine
/// hull (the minimizer has full support on S).
FrankWolfeResult frank_wolfe_select(const LminPolytope& lmin, Selection objective, int depth = 2,
                                    double tol = 1e-9, long max_iters = 100'000);

}  // namespace dln
