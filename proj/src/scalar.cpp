#include "dln/scalar.hpp"

#include "dln/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dln {

double brent_root(const ScalarFn& f, double lo, double hi, double tol, int max_iter) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NoBracket("f(" + std::to_string(lo) + ") = " + std::to_string(fa) + " and f(" +
                    std::to_string(hi) + ") = " + std::to_string(fb) + " share a sign");
  }
  const double f_scale = 1.0 + std::max(std::abs(fa), std::abs(fb));
  const double eps = std::numeric_limits<double>::epsilon();

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double width_tol = 2.0 * eps * std::abs(b) + 0.5 * tol * (1.0 + std::abs(b));
    const double m = 0.5 * (c - b);
    if (fb == 0.0 || std::abs(fb) <= tol * f_scale || std::abs(m) <= width_tol) return b;

    if (std::abs(e) >= width_tol && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points exist.
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(width_tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > width_tol) ? d : (m > 0.0 ? width_tol : -width_tol);
    fb = f(b);
  }
  return b;
}

namespace {

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const ScalarFn& f, const SimpsonPanel& p, double tol, int depth, int max_depth,
              bool& exhausted) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  // Second test: the panel difference is at roundoff level and cannot shrink.
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= roundoff) {
    return left + right + delta / 15.0;
  }
  if (depth >= max_depth) {
    exhausted = true;
    return left + right + delta / 15.0;
  }
  return refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1, max_depth, exhausted) +
         refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1, max_depth, exhausted);
}

}  // namespace

double adaptive_quadrature(const ScalarFn& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson(a, b, fa, fm, fb);
  // The absolute target scales with the magnitude of a first estimate so that
  // |error| <= tol * (1 + |result|) holds for smooth integrands.
  const double target = tol * (1.0 + std::abs(whole));
  bool exhausted = false;
  const double result = refine(f, {a, b, fa, fm, fb, whole}, target, 0, max_depth, exhausted);
  if (exhausted) {
    throw MaxDepth("subdivision limit reached on [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]",
                   result);
  }
  return result;
}

}  // namespace dln
