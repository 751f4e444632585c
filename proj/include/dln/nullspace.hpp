#pragma once

#include "dln/linalg.hpp"

namespace dln {

/// Null space property constants anchored at (S, sign, g*).
struct NspConstants {
  double rho = 0.0;
  double rho_minus = 0.0;
  double rho_tilde = 0.0;
  double kappa_star = 1.0;
  Vector attainer_rho;  // |attainer_{S^c}|_1 = 1 when the search space is nonempty
  bool exact = true;    // false when |S| exceeded the enumeration cap
};

/// ker A split into the tangent space T of L_min and its weighted complement N.
struct Decomposition {
  SubspaceBasis kernel;
  SubspaceBasis tangent;
  SubspaceBasis complement;
  double weight_exponent = 1.0;  // 1 for D = 2, 1 + gamma for D >= 3
};

/// {n in ker A : sum_S sign_i n_i = 0, n_{S^c} = 0}.
SubspaceBasis tangent_basis(const SubspaceBasis& kernel, const IndexSet& support, const SignVector& sign);

/// {n in ker A : sum_S t_i n_i / |g*_i|^weight_exponent = 0 for all t in T}.
SubspaceBasis complement_basis(const SubspaceBasis& kernel, const SubspaceBasis& tangent,
                               const Vector& gstar, const IndexSet& support, double weight_exponent);

/// Weight exponent of the depth-D geometry.
double weight_exponent_for_depth(int depth);

Decomposition decompose(const Matrix& a, const IndexSet& support, const SignVector& sign,
                        const Vector& gstar, int depth);

/// rho by one LP, rho_tilde and rho_minus by enumerating sign / indicator
/// patterns on S (one LP each) when |S| <= cap; above the cap a multi-start
/// pattern ascent yields lower bounds and exact = false.
NspConstants compute_constants(const SubspaceBasis& search, const IndexSet& support,
                               const SignVector& sign, const Vector& gstar, int cap = 16,
                               int threads = 1);

/// max_S |g*| / min_S |g*|.
double condition_number(const Vector& gstar, const IndexSet& support);

}  // namespace dln
