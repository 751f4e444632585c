#pragma once

#include <functional>

namespace dln {

using ScalarFn = std::function<double(double)>;

/// Brent's method on [lo, hi]. Requires f(lo) * f(hi) <= 0, otherwise
/// throws NoBracket. Stops when |f(r)| <= tol * (1 + max(|f(lo)|, |f(hi)|))
/// or the bracket is narrower than tol * (1 + |r|).
double brent_root(const ScalarFn& f, double lo, double hi, double tol = 1e-14,
                  int max_iter = 500);

/// Adaptive Simpson quadrature of f over [a, b] with interval halving.
/// Throws MaxDepth (carrying the best estimate) if a panel needs more than
/// max_depth halvings.
double adaptive_quadrature(const ScalarFn& f, double a, double b, double tol = 1e-11,
                           int max_depth = 60);

}  // namespace dln
