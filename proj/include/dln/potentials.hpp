#pragma once

#include "dln/linalg.hpp"

namespace dln {

enum class Geometry { Shallow, Deep };

/// Bregman potential of a depth-D diagonal network initialised at scale alpha.
/// Shallow is the hypentropy H_alpha (D = 2); Deep is Q^D_alpha (D >= 3).
struct Potential {
  Geometry kind = Geometry::Shallow;
  double alpha = 1.0;
  int depth = 2;

  static Potential shallow(double alpha);
  static Potential deep(int depth, double alpha);
  /// Shallow for depth 2, Deep otherwise.
  static Potential for_depth(int depth, double alpha);

  /// (D - 2) / D; zero for the shallow geometry.
  double gamma() const;
};

// Scalar building blocks.

/// sign(t) * log(|t| + sqrt(t^2 + 1)), evaluated without cancellation.
double arsinh(double t);
/// sinh with an explicit overflow guard: |z| > 700 throws Overflow.
double sinh_checked(double z);

/// h_D(z) = (1 - z)^{-D/(D-2)} - (1 + z)^{-D/(D-2)} on (-1, 1).
double deep_h(int depth, double z);
/// h_D evaluated at 1 - w, accurate when w is tiny.
double deep_h_at_complement(int depth, double w);
double deep_h_derivative(int depth, double z);
/// Inverse of h_D; result lies strictly inside (-1, 1).
double deep_h_inverse(int depth, double u);
/// 1 - h_D^{-1}(u) for u >= 0, keeping relative accuracy as h_D^{-1}(u) -> 1.
double deep_h_inverse_complement(int depth, double u);
/// q_D(u) = integral of h_D^{-1} over [0, u].
double deep_q(int depth, double u);

/// Componentwise gradient map, its inverse, and the Hessian diagonal.
double grad_component(const Potential& p, double x);
double grad_inverse_component(const Potential& p, double z);
double hessian_component(const Potential& p, double x);

// Vector operations.

double potential_value(const Potential& p, const Vector& x);
Vector potential_grad(const Potential& p, const Vector& x);
/// Throws DomainViolation for Deep when some |z_i| >= 1.
Vector potential_grad_inverse(const Potential& p, const Vector& z);
/// D_F(x, 0), always >= 0.
double bregman_to_zero(const Potential& p, const Vector& x);

}  // namespace dln
