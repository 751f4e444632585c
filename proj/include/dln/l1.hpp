#pragma once

#include "dln/linalg.hpp"

namespace dln {

/// An l1 minimizer of {A x = y} together with support and sign information.
struct L1Certificate {
  Vector minimizer;
  double value = 0.0;  // |minimizer|_1
  IndexSet support;
  SignVector sign;  // entries in {-1, 0, +1}; zero off the support
  bool unique = false;
  bool support_is_lmin_support = false;  // support equals supp(L_min)
};

struct SupportSign {
  IndexSet support;
  SignVector sign;
  bool unique = false;
  Vector lowest;   // min x_i over L_min
  Vector highest;  // max x_i over L_min
};

/// min |x|_1 s.t. A x = y via the split x = p - q. Support and sign are those
/// of the returned point; the uniqueness flag is left unset.
L1Certificate basis_pursuit(const Matrix& a, const Vector& y, double tol = 1e-9);

/// Per-coordinate extremes over L_min = {A x = y, |x|_1 <= value}: 2d LPs.
SupportSign support_and_sign(const Matrix& a, const Vector& y, double value, int threads = 1);

/// basis_pursuit followed by support_and_sign. For unique minimizers the
/// point is refined by an exact solve on the support.
L1Certificate certify_l1(const Matrix& a, const Vector& y, int threads = 1);

}  // namespace dln
