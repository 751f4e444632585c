#include "dln/sharpness.hpp"

#include "dln/errors.hpp"
#include "dln/potentials.hpp"

#include <cmath>
#include <functional>

namespace dln {
namespace {

SharpInstance assemble(int d, double g1, double g2, const Vector& gstar, SharpVariant v) {
  SharpInstance inst;
  inst.n = Vector::Constant(d, 1.0 / (d - 2));
  inst.n(0) = g1;
  inst.n(1) = -g2;
  inst.gamma1 = g1;
  inst.gamma2 = g2;
  inst.gstar = gstar;
  inst.variant = v;
  inst.a = rows_orthogonal_to(inst.n);
  inst.y = inst.a * gstar;
  return inst;
}

// Root of an increasing function: expand [lo, hi] around 0 by doubling, then
// bisect down to adjacent doubles.
double increasing_root(const std::function<double(double)>& phi, double start, double cap) {
  double lo = 0.0, hi = 0.0;
  const double f0 = phi(0.0);
  if (f0 == 0.0) return 0.0;
  double step = start;
  if (f0 < 0.0) {
    while (phi(step) < 0.0) {
      if (step > cap) throw NoBracket("fixed-point bracket exceeded its cap");
      step *= 2.0;
    }
    hi = step;
    lo = step / 2.0 < start ? 0.0 : step / 2.0;
  } else {
    while (phi(-step) > 0.0) {
      if (step > cap) throw NoBracket("fixed-point bracket exceeded its cap");
      step *= 2.0;
    }
    lo = -step;
    hi = -step / 2.0 > -start ? 0.0 : -step / 2.0;
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(phi(lo)) < std::abs(phi(hi)) ? lo : hi;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameters("alpha must be positive");
}

// 1 - h^{-1}(u), accurate for u >= 0.
double one_minus_hinv(int depth, double u) {
  return u >= 0.0 ? deep_h_inverse_complement(depth, u) : 1.0 - deep_h_inverse(depth, u);
}

}  // namespace

Matrix rows_orthogonal_to(const Vector& n) {
  const Matrix col = n;
  Eigen::HouseholderQR<Matrix> qr(col);
  const Matrix q = qr.householderQ();
  return q.rightCols(n.size() - 1).transpose();
}

SharpInstance build_sharp_shallow(int d, double rho, double rho_minus, double kappa, SharpVariant variant) {
  if (d < 3) throw InvalidParameters("d must be at least 3");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidParameters("rho must lie in [0, 1)");
  if (!(rho_minus > 0.0 && rho_minus >= rho)) throw InvalidParameters("need rho_minus > 0 and rho_minus >= rho");
  if (!(kappa >= 1.0)) throw InvalidParameters("kappa must be at least 1");
  if (variant == SharpVariant::Deep) throw InvalidParameters("use build_sharp_deep");
  Vector g = Vector::Zero(d);
  g(0) = variant == SharpVariant::UpperA ? 1.0 : kappa;
  g(1) = variant == SharpVariant::UpperA ? kappa : 1.0;
  return assemble(d, rho_minus - rho, rho_minus, g, variant);
}

SharpInstance build_sharp_deep(int d, double rho, double gamma1) {
  if (d < 3) throw InvalidParameters("d must be at least 3");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidParameters("rho must lie in [0, 1)");
  if (!(gamma1 >= 0.0)) throw InvalidParameters("gamma1 must be nonnegative");
  Vector g = Vector::Zero(d);
  g(0) = 1.0;
  g(1) = 1.0;
  return assemble(d, gamma1, gamma1 + rho, g, SharpVariant::Deep);
}

double shallow_residual(const SharpInstance& inst, double alpha, double t) {
  const double g1 = inst.gstar(0), g2 = inst.gstar(1);
  const double arg = inst.gamma2 * arsinh((g2 - t * inst.gamma2) / (2 * alpha)) -
                     inst.gamma1 * arsinh((g1 + t * inst.gamma1) / (2 * alpha));
  return t - 2 * alpha * (inst.d() - 2) * sinh_checked(arg);
}

double fixed_point_shallow(const SharpInstance& inst, double alpha) {
  check_alpha(alpha);
  const double g1 = inst.gstar(0), g2 = inst.gstar(1);
  const double scale = 2 * alpha * (inst.d() - 2);
  auto phi = [&](double t) {
    return arsinh(t / scale) + inst.gamma1 * arsinh((g1 + t * inst.gamma1) / (2 * alpha)) -
           inst.gamma2 * arsinh((g2 - t * inst.gamma2) / (2 * alpha));
  };
  return increasing_root(phi, alpha, 10.0 * inst.gstar.lpNorm<1>());
}

double deep_residual(const SharpInstance& inst, int depth, double alpha, double t) {
  const double g1 = inst.gstar(0), g2 = inst.gstar(1);
  const double rho = inst.gamma2 - inst.gamma1;
  const double arg = rho - one_minus_hinv(depth, (g2 - t * inst.gamma2) / alpha) * inst.gamma2 +
                     one_minus_hinv(depth, (g1 + t * inst.gamma1) / alpha) * inst.gamma1;
  if (!(arg > -1.0 + 1e-13 && arg < 1.0 - 1e-13)) throw DomainViolation("h_D argument leaves (-1, 1)");
  return t - alpha * (inst.d() - 2) * deep_h(depth, arg);
}

double fixed_point_deep(const SharpInstance& inst, int depth, double alpha) {
  check_alpha(alpha);
  if (depth < 3) throw InvalidParameters("depth must be at least 3");
  const double g1 = inst.gstar(0), g2 = inst.gstar(1);
  const double rho = inst.gamma2 - inst.gamma1;
  const double scale = alpha * (inst.d() - 2);
  // h^{-1}(t/scale) + gamma1 z1 - gamma2 z2 with z = 1 - w.
  auto phi = [&](double t) {
    return deep_h_inverse(depth, t / scale) - rho -
           inst.gamma1 * one_minus_hinv(depth, (g1 + t * inst.gamma1) / alpha) +
           inst.gamma2 * one_minus_hinv(depth, (g2 - t * inst.gamma2) / alpha);
  };
  return increasing_root(phi, alpha, 10.0 * inst.gstar.lpNorm<1>());
}

LimitEstimate limit_ratio(const std::vector<double>& alphas, const std::vector<double>& values,
                          double target, double power) {
  if (alphas.size() != values.size() || alphas.size() < 3) {
    throw InvalidParameters("limit_ratio needs at least three matching samples");
  }
  LimitEstimate out;
  for (double v : values) out.ratios.push_back(v / target);
  const std::size_t n = alphas.size();
  Matrix design(3, 2);
  Vector rhs(3);
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t i = n - 3 + k;
    design(static_cast<Eigen::Index>(k), 0) = 1.0;
    design(static_cast<Eigen::Index>(k), 1) = std::pow(alphas[i], power);
    rhs(static_cast<Eigen::Index>(k)) = out.ratios[i];
  }
  if (power == 0.0 || design.col(1).maxCoeff() == design.col(1).minCoeff()) {
    out.extrapolated = rhs.mean();
  } else {
    out.extrapolated = design.colPivHouseholderQr().solve(rhs)(0);
  }
  return out;
}

}  // namespace dln
