#include "dln/potentials.hpp"

#include "dln/errors.hpp"
#include "dln/scalar.hpp"

#include <cmath>
#include <string>

namespace dln {
namespace {

double exponent(int depth) { return static_cast<double>(depth) / (depth - 2); }

void check_depth(int depth) {
  if (depth < 3) throw InvalidParameters("deep potential needs depth >= 3, got " + std::to_string(depth));
}

double copysign_nonzero(double magnitude, double sign_source) {
  return sign_source < 0.0 ? -magnitude : magnitude;
}

constexpr double kQuadratureTol = 1e-11;
constexpr double kSmallQ = 1e-8;

}  // namespace

Potential Potential::shallow(double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameters("alpha must be positive");
  return {Geometry::Shallow, alpha, 2};
}

Potential Potential::deep(int depth, double alpha) {
  check_depth(depth);
  if (!(alpha > 0.0)) throw InvalidParameters("alpha must be positive");
  return {Geometry::Deep, alpha, depth};
}

Potential Potential::for_depth(int depth, double alpha) {
  if (depth == 2) return shallow(alpha);
  return deep(depth, alpha);
}

double Potential::gamma() const {
  return kind == Geometry::Deep ? static_cast<double>(depth - 2) / depth : 0.0;
}

double arsinh(double t) {
  const double a = std::abs(t);
  double r;
  if (a > 1e8) {
    r = std::log(2.0 * a) + 0.25 / (a * a);
  } else {
    // log(a + sqrt(a^2 + 1)) = log1p(a + a^2 / (1 + sqrt(1 + a^2)))
    r = std::log1p(a + a * a / (1.0 + std::sqrt(1.0 + a * a)));
  }
  return copysign_nonzero(r, t);
}

double sinh_checked(double z) {
  if (std::abs(z) > 700.0) throw Overflow("sinh argument " + std::to_string(z) + " exceeds 700");
  return 0.5 * (std::expm1(z) - std::expm1(-z));
}

double deep_h(int depth, double z) {
  check_depth(depth);
  if (!(std::abs(z) < 1.0)) throw DomainViolation("h_D needs |z| < 1, got " + std::to_string(z));
  const double p = exponent(depth);
  const double a = std::abs(z);
  // (1-a)^{-p} - (1+a)^{-p} = (1+a)^{-p} * expm1(2 p atanh(a))
  const double value = std::pow(1.0 + a, -p) * std::expm1(2.0 * p * std::atanh(a));
  return copysign_nonzero(value, z);
}

double deep_h_at_complement(int depth, double w) {
  check_depth(depth);
  if (!(w > 0.0 && w <= 2.0)) throw DomainViolation("complement w must lie in (0, 2]");
  if (w > 0.5) return deep_h(depth, 1.0 - w);
  const double p = exponent(depth);
  return std::pow(w, -p) - std::pow(2.0 - w, -p);
}

double deep_h_derivative(int depth, double z) {
  check_depth(depth);
  if (!(std::abs(z) < 1.0)) throw DomainViolation("h_D' needs |z| < 1");
  const double p = exponent(depth);
  return p * (std::pow(1.0 - z, -p - 1.0) + std::pow(1.0 + z, -p - 1.0));
}

double deep_h_inverse_complement(int depth, double u) {
  check_depth(depth);
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainViolation("complement inverse needs finite u >= 0");
  if (u == 0.0) return 1.0;
  const double gamma = static_cast<double>(depth - 2) / depth;
  if (u < 1.0) return 1.0 - deep_h_inverse(depth, u);
  // Sandwich (u+1)^{-gamma} <= w <= u^{-gamma}; solve in s = log w so the
  // bracket criterion is relative in w.
  const double s_lo = -gamma * std::log1p(u);
  const double s_hi = -gamma * std::log(u);
  auto f = [&](double s) { return deep_h_at_complement(depth, std::exp(s)) - u; };
  double s = (s_hi - s_lo <= 0.0) ? s_lo : brent_root(f, s_lo, s_hi, 1e-14);
  // Newton polish in s: d/ds h(1 - e^s) = -e^s h'(1 - e^s).
  const double p = exponent(depth);
  for (int k = 0; k < 2; ++k) {
    const double w = std::exp(s);
    const double fs = deep_h_at_complement(depth, w) - u;
    const double deriv = -w * p * (std::pow(w, -p - 1.0) + std::pow(2.0 - w, -p - 1.0));
    const double next = s - fs / deriv;
    if (!(next >= s_lo && next <= s_hi)) break;
    if (std::abs(f(next)) >= std::abs(fs)) break;
    s = next;
  }
  return std::exp(s);
}

double deep_h_inverse(int depth, double u) {
  check_depth(depth);
  if (!std::isfinite(u)) throw DomainViolation("h_D^{-1} needs finite u");
  if (u == 0.0) return 0.0;
  const double a = std::abs(u);
  if (a >= 1.0) return copysign_nonzero(1.0 - deep_h_inverse_complement(depth, a), u);
  const double gamma = static_cast<double>(depth - 2) / depth;
  const double hi = 1.0 - std::pow(1.0 + a, -gamma);
  auto f = [&](double z) { return deep_h(depth, z) - a; };
  double z = brent_root(f, 0.0, hi, 1e-14);
  for (int k = 0; k < 2; ++k) {
    const double fz = f(z);
    const double next = z - fz / deep_h_derivative(depth, z);
    if (!(next > 0.0 && next <= hi)) break;
    if (std::abs(f(next)) >= std::abs(fz)) break;
    z = next;
  }
  return copysign_nonzero(z, u);
}

double deep_q(int depth, double u) {
  check_depth(depth);
  const double a = std::abs(u);
  const double gamma = static_cast<double>(depth - 2) / depth;
  if (a <= kSmallQ) return a * a * gamma / 4.0;
  return adaptive_quadrature([depth](double v) { return deep_h_inverse(depth, v); }, 0.0, a,
                             kQuadratureTol);
}

double grad_component(const Potential& p, double x) {
  if (p.kind == Geometry::Shallow) return arsinh(x / (2.0 * p.alpha));
  return deep_h_inverse(p.depth, x / p.alpha);
}

double grad_inverse_component(const Potential& p, double z) {
  if (p.kind == Geometry::Shallow) return 2.0 * p.alpha * sinh_checked(z);
  if (!(std::abs(z) < 1.0)) {
    throw DomainViolation("deep mirror map needs |z| < 1, got " + std::to_string(z));
  }
  return p.alpha * deep_h(p.depth, z);
}

double hessian_component(const Potential& p, double x) {
  if (p.kind == Geometry::Shallow) return 1.0 / std::sqrt(x * x + 4.0 * p.alpha * p.alpha);
  const double z = deep_h_inverse(p.depth, x / p.alpha);
  return 1.0 / (p.alpha * deep_h_derivative(p.depth, z));
}

double potential_value(const Potential& p, const Vector& x) {
  double total = 0.0;
  if (p.kind == Geometry::Shallow) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double xi = x(i);
      total += xi * arsinh(xi / (2.0 * p.alpha)) - std::sqrt(xi * xi + 4.0 * p.alpha * p.alpha);
    }
    return total;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) total += p.alpha * deep_q(p.depth, x(i) / p.alpha);
  return total;
}

Vector potential_grad(const Potential& p, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = grad_component(p, x(i));
  return g;
}

Vector potential_grad_inverse(const Potential& p, const Vector& z) {
  Vector x(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) x(i) = grad_inverse_component(p, z(i));
  return x;
}

double bregman_to_zero(const Potential& p, const Vector& x) {
  if (p.kind == Geometry::Deep) return potential_value(p, x);
  double total = 0.0;
  const double two_alpha = 2.0 * p.alpha;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    // 2 alpha - sqrt(x^2 + 4 alpha^2) rewritten to avoid cancellation.
    const double root = std::sqrt(xi * xi + two_alpha * two_alpha);
    total += xi * arsinh(xi / two_alpha) - xi * xi / (root + two_alpha);
  }
  return total;
}

}  // namespace dln
