#pragma once

#include "dln/linalg.hpp"

#include <vector>

namespace dln {

enum class SharpVariant { UpperA, LowerB, Deep };

/// One-dimensional-kernel instance with ker A = span{n},
/// n = (gamma1, -gamma2, 1/(d-2), ..., 1/(d-2)) and g* supported on {0, 1}.
struct SharpInstance {
  Matrix a;
  Vector y;
  Vector gstar;
  Vector n;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  SharpVariant variant = SharpVariant::UpperA;
  int d() const { return static_cast<int>(n.size()); }
};

/// Rows of an orthonormal basis of n^perp.
Matrix rows_orthogonal_to(const Vector& n);

/// gamma1 = rho_minus - rho, gamma2 = rho_minus; UpperA: g* = (1, kappa), LowerB: g* = (kappa, 1).
SharpInstance build_sharp_shallow(int d, double rho, double rho_minus, double kappa, SharpVariant variant);
/// gamma2 = gamma1 + rho, g* = (1, 1).
SharpInstance build_sharp_deep(int d, double rho, double gamma1);

/// t with g* + t n the Bregman projection of 0 for the shallow potential.
double fixed_point_shallow(const SharpInstance& inst, double alpha);
/// Same for depth D >= 3.
double fixed_point_deep(const SharpInstance& inst, int depth, double alpha);

/// t - 2 alpha (d-2) sinh(gamma2 arsinh((g2 - t gamma2)/2alpha) - gamma1 arsinh((g1 + t gamma1)/2alpha)).
double shallow_residual(const SharpInstance& inst, double alpha, double t);
/// t - alpha (d-2) h_D(rho + [h^{-1}((g2 - t gamma2)/alpha) - 1] gamma2 + [1 - h^{-1}((g1 + t gamma1)/alpha)] gamma1).
double deep_residual(const SharpInstance& inst, int depth, double alpha, double t);

struct LimitEstimate {
  std::vector<double> ratios;
  double extrapolated = 0.0;
};

/// ratios = values / target; the last three ratios are fitted by least
/// squares to L + c alpha^power and L is returned.
LimitEstimate limit_ratio(const std::vector<double>& alphas, const std::vector<double>& values,
                          double target, double power);

}  // namespace dln
