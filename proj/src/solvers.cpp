#include "dln/solvers.hpp"

#include "dln/errors.hpp"
#include "dln/lp.hpp"
#include "dln/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dln {
namespace {

constexpr double kDeepGuard = 1.0 - 1e-12;
constexpr double kSinhLimit = 700.0;
constexpr int kGrowAfter = 20;
constexpr double kGrowFactor = 1.2;

// Step-size controller shared by the two descent methods.
struct StepRule {
  double eta;
  double cap;
  double floor;
  int accepts = 0;

  void reject() {
    eta *= 0.5;
    accepts = 0;
    if (eta < floor) {
      throw StepCollapse("step size fell below " + std::to_string(floor) + " without decrease");
    }
  }
  void accept() {
    if (++accepts >= kGrowAfter) {
      eta = std::min(eta * kGrowFactor, cap);
      accepts = 0;
    }
  }
};

void record(SolveTrace& trace, long iter, double loss, const SolveConfig& cfg, bool force) {
  if (force || iter % cfg.record_every == 0) {
    if (trace.loss_history.empty() || trace.loss_history.back().first != iter) {
      trace.loss_history.emplace_back(iter, loss);
    }
  }
}

void check_problem(const Matrix& a, const Vector& y) {
  if (a.rows() != y.size()) throw InvalidDims("A and y have incompatible shapes");
}

}  // namespace

double squared_loss(const Matrix& a, const Vector& y, const Vector& x) {
  return (y - a * x).squaredNorm();
}

SolveTrace mirror_descent(const Matrix& a, const Vector& y, const Potential& p,
                          const SolveConfig& cfg) {
  check_problem(a, y);
  const Eigen::Index d = a.cols();
  const double norm_a = spectral_norm(a);
  const double step0 = cfg.step_init > 0.0 ? cfg.step_init : 1.0 / (2.0 * norm_a * norm_a);
  StepRule rule{step0, step0, cfg.step_min};

  Vector z = Vector::Zero(d);
  Vector lambda = Vector::Zero(y.size());  // z = A^T lambda throughout
  Vector x = Vector::Zero(d);
  Vector r = y;
  double loss = r.squaredNorm();
  SolveTrace trace;
  const double limit = p.kind == Geometry::Deep ? kDeepGuard : kSinhLimit;
  long iter = 0;
  record(trace, iter, loss, cfg, true);
  Vector zc(d), xc(d), rc(y.size());
  while (loss >= cfg.loss_tol && iter < cfg.max_iters) {
    const Vector g = 2.0 * (a.transpose() * r);  // minus the loss gradient
    while (true) {
      zc = z + rule.eta * g;
      if (zc.cwiseAbs().maxCoeff() >= limit) {
        rule.reject();
        continue;
      }
      for (Eigen::Index i = 0; i < d; ++i) xc(i) = grad_inverse_component(p, zc(i));
      rc = y - a * xc;
      const double lc = rc.squaredNorm();
      if (!(lc < loss)) {
        rule.reject();
        continue;
      }
      lambda += (2.0 * rule.eta) * r;
      z.swap(zc);
      x.swap(xc);
      r.swap(rc);
      loss = lc;
      break;
    }
    rule.accept();
    ++iter;
    record(trace, iter, loss, cfg, false);
  }
  if (cfg.newton_polish && loss < cfg.loss_tol) {
    // Newton on A grad_inverse(A^T lambda) = y; the residual is the merit.
    for (int k = 0; k < 60; ++k) {
      Vector w(d);
      for (Eigen::Index i = 0; i < d; ++i) w(i) = 1.0 / hessian_component(p, x(i));
      const Matrix jac = a * w.asDiagonal() * a.transpose();
      const Vector step = jac.ldlt().solve(r);
      bool accepted = false;
      for (double s = 1.0; s > 1e-10; s *= 0.5) {
        const Vector lc = lambda + s * step;
        zc = a.transpose() * lc;
        if (zc.cwiseAbs().maxCoeff() >= limit) continue;
        for (Eigen::Index i = 0; i < d; ++i) xc(i) = grad_inverse_component(p, zc(i));
        rc = y - a * xc;
        const double l2 = rc.squaredNorm();
        if (l2 < loss) {
          lambda = lc;
          z.swap(zc);
          x.swap(xc);
          r.swap(rc);
          loss = l2;
          accepted = true;
          break;
        }
      }
      if (!accepted || loss == 0.0) break;
      trace.polished = true;
    }
  }
  record(trace, iter, loss, cfg, true);
  trace.final_x = x;
  trace.final_loss = loss;
  trace.iterations = iter;
  trace.converged = loss < cfg.loss_tol;
  return trace;
}

Vector bregman_1d_oracle(const Matrix& a, const Vector& y, const Potential& p, const Vector& g0) {
  check_problem(a, y);
  const SubspaceBasis kernel = kernel_basis(a);
  if (kernel.dim() != 1) {
    throw KernelDimMismatch("kernel has dimension " + std::to_string(kernel.dim()) + ", expected 1");
  }
  const Vector n = kernel.column(0);
  auto phi = [&](double t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n.size(); ++i) s += grad_component(p, g0(i) + t * n(i)) * n(i);
    return s;
  };
  const double f0 = phi(0.0);
  if (f0 == 0.0) return g0;
  // phi is strictly increasing; expand away from 0 until the sign flips.
  double step = std::max(1.0, g0.lpNorm<Eigen::Infinity>()) * 1e-3;
  double near = 0.0;
  double far = f0 > 0.0 ? -step : step;
  while ((phi(far) > 0.0) == (f0 > 0.0)) {
    near = far;
    far *= 2.0;
    if (!std::isfinite(far) || std::abs(far) > 1e200) throw NoBracket("oracle bracket expansion failed");
  }
  double t = brent_root(phi, std::min(near, far), std::max(near, far), 1e-16);
  // Newton polish with the analytic derivative.
  for (int k = 0; k < 3; ++k) {
    const double ft = phi(t);
    if (ft == 0.0) break;
    double deriv = 0.0;
    for (Eigen::Index i = 0; i < n.size(); ++i) deriv += n(i) * n(i) * hessian_component(p, g0(i) + t * n(i));
    const double next = t - ft / deriv;
    if (!(std::abs(phi(next)) < std::abs(ft))) break;
    t = next;
  }
  return g0 + t * n;
}

SolveTrace factored_gd(const Matrix& a, const Vector& y, int depth, double alpha,
                       const SolveConfig& cfg) {
  check_problem(a, y);
  if (depth < 2) throw InvalidParameters("depth must be at least 2");
  if (!(alpha > 0.0)) throw InvalidParameters("alpha must be positive");
  const Eigen::Index d = a.cols();
  const double dd = depth;
  const double norm_a = spectral_norm(a);
  double step0 = cfg.step_init;
  if (step0 <= 0.0) {
    // Curvature in u scales like D^2 |A|^2 |x|^{(2D-2)/D}.
    const double scale = std::max(1.0, least_norm_solution(a, y).lpNorm<1>());
    step0 = 1.0 / (2.0 * dd * dd * norm_a * norm_a * std::pow(scale, (2.0 * dd - 2.0) / dd));
  }
  StepRule rule{step0, step0, cfg.step_min};

  const double u0 = std::pow(alpha, 1.0 / dd);
  Vector u = Vector::Constant(d, u0);
  Vector v = Vector::Constant(d, u0);
  auto assemble = [depth](const Vector& uu, const Vector& vv) {
    return Vector(uu.array().pow(depth) - vv.array().pow(depth));
  };
  Vector x = Vector::Zero(d);  // u0^D - v0^D vanishes exactly
  Vector r = y;
  double loss = r.squaredNorm();
  const double loss0 = loss;
  SolveTrace trace;
  long iter = 0;
  record(trace, iter, loss, cfg, true);
  while (loss >= cfg.loss_tol && iter < cfg.max_iters) {
    const Vector g = 2.0 * dd * (a.transpose() * r);
    const Vector gu = g.cwiseProduct(u.array().pow(depth - 1).matrix());
    const Vector gv = g.cwiseProduct(v.array().pow(depth - 1).matrix());
    while (true) {
      const Vector uc = u + rule.eta * gu;
      const Vector vc = v - rule.eta * gv;
      const Vector xc = assemble(uc, vc);
      const Vector rc = y - a * xc;
      const double lc = rc.squaredNorm();
      if (!std::isfinite(lc) || lc > 1e6 * loss0) {
        if (rule.eta <= rule.floor * 2.0) throw Divergence("loss grew by more than a factor 1e6");
        rule.reject();
        continue;
      }
      if (!(lc < loss)) {
        rule.reject();
        continue;
      }
      u = uc;
      v = vc;
      x = xc;
      r = rc;
      loss = lc;
      break;
    }
    rule.accept();
    ++iter;
    record(trace, iter, loss, cfg, false);
  }
  record(trace, iter, loss, cfg, true);
  trace.final_x = x;
  trace.final_loss = loss;
  trace.iterations = iter;
  trace.converged = loss < cfg.loss_tol;
  return trace;
}

namespace {

constexpr double kGradClamp = 1e12;

struct Surrogate {
  Selection kind;
  double q;  // 2 / D for the power objective

  double value(const Vector& w) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double wi = std::max(w(i), 0.0);
      if (kind == Selection::ShallowEntropy) {
        s += wi > 0.0 ? wi * std::log(wi) - wi : 0.0;
      } else {
        s -= std::pow(wi, q);
      }
    }
    return s;
  }
  double grad(double wi) const {
    double g;
    if (wi <= 0.0) {
      g = -kGradClamp;
    } else if (kind == Selection::ShallowEntropy) {
      g = std::log(wi);
    } else {
      g = -q * std::pow(wi, q - 1.0);
    }
    return std::clamp(g, -kGradClamp, kGradClamp);
  }
  double curvature(double wi) const {
    if (kind == Selection::ShallowEntropy) return 1.0 / wi;
    return q * (1.0 - q) * std::pow(wi, q - 2.0);
  }
  Vector grad(const Vector& w) const {
    Vector g(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) g(i) = grad(w(i));
    return g;
  }
};

}  // namespace

FrankWolfeResult frank_wolfe_select(const LminPolytope& lmin, Selection objective, int depth,
                                    double tol, long max_iters) {
  const Eigen::Index d = lmin.a.cols();
  const Eigen::Index k = static_cast<Eigen::Index>(lmin.support.size());
  if (k == 0) throw EmptyPolytope("support is empty");
  if (objective == Selection::DeepPower && depth < 3) throw InvalidParameters("power objective needs D >= 3");
  const Surrogate f{objective, 2.0 / depth};

  // w = sign_S * x_S >= 0 with [A_S diag(sign_S); 1^T] w = [y; value].
  Matrix eq(lmin.a.rows() + 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const int i = lmin.support[static_cast<std::size_t>(j)];
    eq.col(j).head(lmin.a.rows()) = lmin.a.col(i) * static_cast<double>(lmin.sign(i));
    eq(lmin.a.rows(), j) = 1.0;
  }
  Vector rhs(lmin.a.rows() + 1);
  rhs << lmin.y, lmin.value;

  LpSolver lp;
  Vector w;
  try {
    // A zero objective leaves the interior point method near the analytic
    // centre, which has full support.
    w = lp.solve(LpProblem::nonnegative(Vector::Zero(k), eq, rhs)).x;
  } catch (const Infeasible&) {
    throw EmptyPolytope("L_min description is infeasible");
  }
  w = w.cwiseMax(0.0);

  FrankWolfeResult out;
  for (long it = 0; it < max_iters; ++it) {
    const Vector g = f.grad(w);
    const Vector vtx = lp.solve(LpProblem::nonnegative(g, eq, rhs)).x.cwiseMax(0.0);
    const Vector dir = vtx - w;
    out.gap = -g.dot(dir);
    out.iterations = it;
    if (out.gap <= tol) break;
    auto slope = [&](double s) { return f.grad(Vector(w + s * dir)).dot(dir); };
    double step = 1.0;
    if (slope(1.0) > 0.0) step = brent_root(slope, 0.0, 1.0, 1e-14);
    w += step * dir;
    w = w.cwiseMax(0.0);
  }

  // Newton polish on the affine hull, staying inside w > 0.
  if (w.minCoeff() > 0.0) {
    const SubspaceBasis z = kernel_basis(eq);
    for (int it = 0; it < 60 && z.dim() > 0; ++it) {
      Vector curv(k);
      for (Eigen::Index i = 0; i < k; ++i) curv(i) = f.curvature(w(i));
      const Vector gz = z.vectors.transpose() * f.grad(w);
      if (gz.norm() <= 1e-15 * (1.0 + f.grad(w).norm())) break;
      const Matrix h = z.vectors.transpose() * curv.asDiagonal() * z.vectors;
      const Vector delta = z.vectors * h.ldlt().solve(-gz);
      double s = 1.0;
      const double f0 = f.value(w);
      while (s > 1e-12) {
        const Vector wn = w + s * delta;
        if (wn.minCoeff() > 0.0 && f.value(wn) <= f0 + 1e-4 * s * gz.dot(z.vectors.transpose() * delta)) break;
        s *= 0.5;
      }
      if (s <= 1e-12) break;
      const Vector wn = w + s * delta;
      if ((wn - w).norm() <= 1e-16 * w.norm()) {
        w = wn;
        break;
      }
      w = wn;
    }
  }

  out.x = Vector::Zero(d);
  for (Eigen::Index j = 0; j < k; ++j) {
    const int i = lmin.support[static_cast<std::size_t>(j)];
    out.x(i) = static_cast<double>(lmin.sign(i)) * w(j);
  }
  return out;
}

}  // namespace dln
