#include "dln/lp.hpp"

#include "dln/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dln {
namespace {

// One original variable written as shift + sum(coef * standard column).
struct VarMap {
  double shift = 0.0;
  int col_a = -1;
  double coef_a = 0.0;
  int col_b = -1;
  double coef_b = 0.0;
};

struct StandardForm {
  Matrix a;
  Vector b;
  Vector c;
  double objective_shift = 0.0;
  std::vector<VarMap> maps;
};

StandardForm to_standard_form(const LpProblem& p) {
  const int n = p.num_vars();
  const int m = static_cast<int>(p.eq_matrix.rows());
  StandardForm sf;
  sf.maps.resize(static_cast<std::size_t>(n));
  int cols = 0;
  std::vector<std::pair<int, double>> upper_rows;  // (column, capacity)
  for (int j = 0; j < n; ++j) {
    const double lo = p.lower(j);
    const double hi = p.upper(j);
    VarMap& vm = sf.maps[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      vm.shift = lo;
      vm.col_a = cols++;
      vm.coef_a = 1.0;
      if (std::isfinite(hi)) upper_rows.emplace_back(vm.col_a, hi - lo);
    } else if (std::isfinite(hi)) {
      vm.shift = hi;
      vm.col_a = cols++;
      vm.coef_a = -1.0;
    } else {
      vm.col_a = cols++;
      vm.coef_a = 1.0;
      vm.col_b = cols++;
      vm.coef_b = -1.0;
    }
  }
  const int slack_start = cols;
  cols += static_cast<int>(upper_rows.size());
  const int rows = m + static_cast<int>(upper_rows.size());
  sf.a = Matrix::Zero(rows, cols);
  sf.b = Vector::Zero(rows);
  sf.c = Vector::Zero(cols);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = sf.maps[static_cast<std::size_t>(j)];
    sf.objective_shift += p.objective(j) * vm.shift;
    sf.c(vm.col_a) += p.objective(j) * vm.coef_a;
    if (vm.col_b >= 0) sf.c(vm.col_b) += p.objective(j) * vm.coef_b;
    for (int i = 0; i < m; ++i) {
      const double aij = p.eq_matrix(i, j);
      if (aij == 0.0) continue;
      sf.a(i, vm.col_a) += aij * vm.coef_a;
      if (vm.col_b >= 0) sf.a(i, vm.col_b) += aij * vm.coef_b;
    }
  }
  for (int i = 0; i < m; ++i) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) shift += p.eq_matrix(i, j) * sf.maps[static_cast<std::size_t>(j)].shift;
    sf.b(i) = p.eq_rhs(i) - shift;
  }
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const int row = m + static_cast<int>(k);
    sf.a(row, upper_rows[k].first) = 1.0;
    sf.a(row, slack_start + static_cast<int>(k)) = 1.0;
    sf.b(row) = upper_rows[k].second;
  }
  return sf;
}

Vector from_standard(const StandardForm& sf, const Vector& xbar) {
  Vector x(static_cast<Eigen::Index>(sf.maps.size()));
  for (std::size_t j = 0; j < sf.maps.size(); ++j) {
    const VarMap& vm = sf.maps[j];
    double v = vm.shift + vm.coef_a * xbar(vm.col_a);
    if (vm.col_b >= 0) v += vm.coef_b * xbar(vm.col_b);
    x(static_cast<Eigen::Index>(j)) = v;
  }
  return x;
}

// Drops linearly dependent equality rows; throws Infeasible when a dropped
// row contradicts the kept ones.
void remove_dependent_rows(Matrix& a, Vector& b) {
  if (a.rows() == 0) return;
  // Row equilibration first so that the rank decision is scale free.
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double s = a.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      a.row(i) /= s;
      b(i) /= s;
    } else if (std::abs(b(i)) > 1e-12) {
      throw Infeasible("equality row " + std::to_string(i) + " reads 0 = " + std::to_string(b(i)));
    }
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a.transpose());
  qr.setThreshold(1e-11);
  const Eigen::Index rank = qr.rank();
  if (rank == a.rows()) return;
  const auto& perm = qr.colsPermutation().indices();
  Matrix kept(rank, a.cols());
  Vector kept_b(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    kept.row(k) = a.row(perm(k));
    kept_b(k) = b(perm(k));
  }
  // Consistency: every dropped row must be a combination of kept rows with
  // the matching right-hand side.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kept.transpose());
  for (Eigen::Index k = rank; k < a.rows(); ++k) {
    const Vector coeffs = cod.solve(a.row(perm(k)).transpose());
    const double predicted = coeffs.dot(kept_b);
    if (std::abs(predicted - b(perm(k))) > 1e-8 * (1.0 + std::abs(b(perm(k))))) {
      throw Infeasible("inconsistent equality constraints");
    }
  }
  a = std::move(kept);
  b = std::move(kept_b);
}

double max_step(const Vector& v, const Vector& dv) {
  double step = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) step = std::min(step, -v(i) / dv(i));
  }
  return step;
}

}  // namespace

LpProblem LpProblem::nonnegative(Vector c, Matrix a, Vector b) {
  const Eigen::Index n = c.size();
  return {std::move(c), std::move(a), std::move(b), Vector::Zero(n), Vector::Constant(n, kInf)};
}

LpResult LpSolver::solve(const LpProblem& problem) {
  const int n = problem.num_vars();
  if (problem.eq_matrix.cols() != n || problem.eq_matrix.rows() != problem.eq_rhs.size() ||
      problem.lower.size() != n || problem.upper.size() != n) {
    throw InvalidDims("LP shapes are incompatible");
  }
  for (int j = 0; j < n; ++j) {
    if (problem.lower(j) > problem.upper(j)) throw Infeasible("lower bound exceeds upper bound");
  }

  StandardForm sf = to_standard_form(problem);
  remove_dependent_rows(sf.a, sf.b);
  const Matrix& a = sf.a;
  const Vector& b = sf.b;
  const Vector& c = sf.c;
  const Eigen::Index m = a.rows();
  const Eigen::Index nb = a.cols();

  auto finish = [&](const Vector& xbar, LpStatus status, int iters, double rd, double gap) {
    LpResult r;
    r.x = from_standard(sf, xbar);
    r.objective_value = problem.objective.dot(r.x);
    r.status = status;
    r.primal_residual = problem.eq_matrix.rows() == 0
                            ? 0.0
                            : (problem.eq_matrix * r.x - problem.eq_rhs).norm() /
                                  (1.0 + problem.eq_rhs.norm());
    r.dual_residual = rd;
    r.gap = gap;
    r.iterations = iters;
    return r;
  };

  if (m == 0) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      if (c(j) < 0.0) throw Unbounded("objective decreases along a free nonnegative direction");
    }
    return finish(Vector::Zero(nb), LpStatus::Optimal, 0, 0.0, 0.0);
  }

  const double b_norm = b.norm();
  const double c_norm = c.norm();
  const double big = 1e10 * (1.0 + b_norm + c_norm);

  // Starting point (Mehrotra's heuristic).
  Matrix aat = a * a.transpose();
  Eigen::LLT<Matrix> aat_chol(aat);
  Vector x = a.transpose() * aat_chol.solve(b);
  Vector lambda = aat_chol.solve(a * c);
  Vector s = c - a.transpose() * lambda;
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  s.array() += std::max(-1.5 * s.minCoeff(), 0.0);
  {
    const double xs = x.dot(s);
    const double dx = 0.5 * xs / std::max(s.sum(), 1e-300);
    const double ds = 0.5 * xs / std::max(x.sum(), 1e-300);
    x.array() += dx;
    s.array() += ds;
  }
  x = x.cwiseMax(1e-8);
  s = s.cwiseMax(1e-8);

  Vector best_x = x;
  double best_merit = kInf;
  double best_rd = kInf;
  double best_gap = kInf;
  int last_progress = 0;

  for (int iter = 0; iter < options_.max_iterations; ++iter) {
    const Vector rb = a * x - b;
    const Vector rc = a.transpose() * lambda + s - c;
    const double mu = x.dot(s) / static_cast<double>(nb);
    const double pobj = c.dot(x);
    const double dobj = b.dot(lambda);
    const double rp = rb.norm() / (1.0 + b_norm);
    const double rd = rc.norm() / (1.0 + c_norm);
    // Complementarity, scaled like the objective.
    const double gap = x.dot(s) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double merit = std::max({rp, rd, gap});
    if (merit < 0.5 * best_merit) last_progress = iter;
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
      best_rd = rd;
      best_gap = gap;
    }
    if (rp <= options_.tol && rd <= options_.tol && gap <= options_.tol) {
      return finish(x, LpStatus::Optimal, iter, rd, gap);
    }
    if (iter - last_progress > 25) break;  // stalled at the accuracy floor
    if (x.maxCoeff() > big) {
      if (rp <= 1e-6) throw Unbounded("primal iterates diverge while staying feasible");
      throw Infeasible("primal iterates diverge");
    }
    if (lambda.cwiseAbs().maxCoeff() > big || s.maxCoeff() > big) {
      throw Infeasible("dual iterates diverge (primal infeasibility certificate)");
    }

    const Vector d2 = x.cwiseQuotient(s);
    normal_.noalias() = a * d2.asDiagonal() * a.transpose();
    double reg = 1e-14 * std::max(1.0, normal_.diagonal().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      chol_.compute(normal_ + reg * Matrix::Identity(m, m));
      if (chol_.info() == Eigen::Success) break;
      reg *= 100.0;
    }

    // Solves S dx + X ds = rxs, A dx = -rb, A^T dl + ds = -rc.
    auto direction = [&](const Vector& rxs, Vector& dx, Vector& dl, Vector& ds) {
      const Vector t = (rxs + x.cwiseProduct(rc)).cwiseQuotient(s);
      const Vector rhs = -rb - a * t;
      dl = chol_.solve(rhs);
      // Iterative refinement against the unregularised normal matrix.
      for (int k = 0; k < 2; ++k) dl += chol_.solve(rhs - normal_ * dl);
      dx = t + d2.cwiseProduct(a.transpose() * dl);
      ds = -rc - a.transpose() * dl;
    };

    Vector dx_aff, dl_aff, ds_aff;
    direction(-x.cwiseProduct(s), dx_aff, dl_aff, ds_aff);
    const double ap_aff = max_step(x, dx_aff);
    const double ad_aff = max_step(s, ds_aff);
    const double mu_aff =
        (x + ap_aff * dx_aff).dot(s + ad_aff * ds_aff) / static_cast<double>(nb);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    const Vector rxs =
        -x.cwiseProduct(s) - dx_aff.cwiseProduct(ds_aff) + Vector::Constant(nb, sigma * mu);
    Vector dx, dl, ds;
    direction(rxs, dx, dl, ds);
    const double eta = std::clamp(1.0 - 10.0 * mu, 0.9, 0.995);
    const double ap = std::min(1.0, eta * max_step(x, dx));
    const double ad = std::min(1.0, eta * max_step(s, ds));
    x += ap * dx;
    lambda += ad * dl;
    s += ad * ds;
  }
  return finish(best_x, LpStatus::MaxIterations, options_.max_iterations, best_rd, best_gap);
}

LpResult solve_lp(const LpProblem& problem, double tol) {
  LpOptions options;
  options.tol = tol;
  LpSolver solver(options);
  return solver.solve(problem);
}

}  // namespace dln
