#include "dln/errors.hpp"
#include "dln/experiments.hpp"
#include "dln/l1.hpp"
#include "dln/nullspace.hpp"
#include "dln/parallel.hpp"
#include "dln/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dln {

double safe_step(const Matrix& a, double scale, int depth) {
  const double na = spectral_norm(a);
  const double base = 1.0 / (2.0 * na * na);
  return depth == 2 ? base / std::max(1.0, 2.0 * scale) : base;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 2) throw DegenerateFit("need at least two rows");
  const auto n = static_cast<double>(rows.size());
  double mx = 0, my = 0;
  for (const auto& [a, e] : rows) {
    if (!(a > 0.0) || !(e > 0.0)) throw DegenerateFit("alpha and error must be positive");
    mx += std::log(a);
    my += std::log(e);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [a, e] : rows) {
    const double dx = std::log(a) - mx, dy = std::log(e) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateFit("all alphas are equal");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

std::vector<std::pair<double, double>> default_window(const std::vector<SweepRow>& rows, double gstar_l1) {
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * gstar_l1;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!r.failed && r.err_l1 > floor) pts.emplace_back(r.alpha, r.err_l1);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() > 4) pts.resize(4);
  return pts;
}

Anchor anchor_point(const Matrix& a, const Vector& y, int depth, int threads) {
  Anchor out;
  out.cert = certify_l1(a, y, threads);
  if (out.cert.unique) {
    out.gstar = out.cert.minimizer;
  } else {
    LminPolytope poly{a, y, out.cert.support, out.cert.sign, out.cert.value};
    const Selection sel = depth == 2 ? Selection::ShallowEntropy : Selection::DeepPower;
    out.gstar = frank_wolfe_select(poly, sel, depth).x;
  }
  return out;
}

SubspaceBasis search_space(const Matrix& a, const Anchor& anchor, int depth) {
  if (anchor.cert.unique) return kernel_basis(a);
  return decompose(a, anchor.cert.support, anchor.cert.sign, anchor.gstar, depth).complement;
}

std::optional<BoundInput> bound_input(const Anchor& anchor, const NspConstants& c, int depth) {
  BoundInput in;
  in.constants = c;
  in.gstar = anchor.gstar;
  in.support = anchor.cert.support;
  in.d = static_cast<int>(anchor.gstar.size());
  in.depth = depth;
  const int need_off = anchor.cert.unique ? 1 : 0;
  if (in.support.empty() || in.off_count() < need_off || !(in.min_s() > 0.0)) return std::nullopt;
  return in;
}

SweepResult run_sweep(const Instance& inst, int depth, const std::vector<double>& alphas,
                      const SolveConfig& cfg, const SweepOptions& opts) {
  if (depth < 2) throw InvalidParameters("depth must be at least 2");
  if (alphas.empty()) throw InvalidParameters("no alphas given");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw InvalidParameters("alphas must be positive");
    if (i > 0 && !(alphas[i] < alphas[i - 1])) throw InvalidParameters("alphas must be strictly decreasing");
  }
  const Matrix& a = inst.a;
  const Vector& y = inst.y;
  const int d = inst.cols();
  SweepResult res;

  const Anchor anchor = anchor_point(a, y, depth, opts.threads);
  const L1Certificate& cert = anchor.cert;
  res.unique = cert.unique;
  res.gstar = anchor.gstar;
  const SubspaceBasis kernel = kernel_basis(a);

  std::optional<BoundInput> base;
  if (opts.with_bounds) {
    try {
      const SubspaceBasis search = cert.unique ? kernel : search_space(a, anchor, depth);
      res.constants = compute_constants(search, cert.support, cert.sign, res.gstar, opts.constants_cap, opts.threads);
      res.constants_exact = res.constants->exact;
      base = bound_input(anchor, *res.constants, depth);
    } catch (const Error&) {
      res.constants.reset();  // no bounds for this instance
    }
  }

  SolveConfig run_cfg = cfg;
  if (run_cfg.step_init <= 0.0) run_cfg.step_init = safe_step(a, res.gstar.lpNorm<Eigen::Infinity>(), depth);
  const bool one_dim = kernel.dim() == 1;
  const IndexSet off = complement(cert.support, d);

  res.rows.resize(alphas.size());
  parallel_for(static_cast<int>(alphas.size()), opts.threads, [&](int k) {
    SweepRow& row = res.rows[static_cast<std::size_t>(k)];
    row.alpha = alphas[static_cast<std::size_t>(k)];
    row.depth = depth;
    const Potential p = Potential::for_depth(depth, row.alpha);
    Vector x;
    try {
      if (one_dim) {
        x = bregman_1d_oracle(a, y, p, res.gstar);
        row.used_oracle = true;
      } else {
        const SolveTrace tr = mirror_descent(a, y, p, run_cfg);
        x = tr.final_x;
        row.iterations = tr.iterations;
      }
    } catch (const Error& e) {
      row.failed = true;
      row.failure = e.what();
      return;
    }
    const Vector err = x - res.gstar;
    row.err_l1 = err.lpNorm<1>();
    for (int i : off) row.err_linf_sc = std::max(row.err_linf_sc, std::abs(err(i)));
    if (inst.x_true && inst.x_true->norm() > 0.0) {
      row.est_err_l2 = (x - *inst.x_true).norm() / inst.x_true->norm();
    }
    if (base) {
      BoundInput in = *base;
      in.alpha = row.alpha;
      const BoundReport r = evaluate_bounds(in, cert.unique);
      if (r.assumptions_ok) {
        row.upper_bound = r.upper;
        row.lower_bound = r.lower;
      }
    }
  });

  std::vector<std::pair<double, double>> pts;
  if (opts.window) {
    const auto [lo, hi] = *opts.window;
    for (const auto& r : res.rows) {
      if (!r.failed && r.alpha >= lo && r.alpha <= hi && r.err_l1 > 0.0) pts.emplace_back(r.alpha, r.err_l1);
    }
  } else {
    pts = default_window(res.rows, res.gstar.lpNorm<1>());
  }
  if (pts.size() >= 2) {
    try {
      const SlopeFit f = fit_slope(pts);
      res.slope = f.slope;
      res.intercept = f.intercept;
      res.r_squared = f.r_squared;
      res.fitted = true;
      double lo = pts.front().first, hi = pts.front().first;
      for (const auto& pt : pts) {
        lo = std::min(lo, pt.first);
        hi = std::max(hi, pt.first);
      }
      res.slope_window = {lo, hi};
    } catch (const DegenerateFit&) {
      res.fitted = false;
    }
  }
  return res;
}

}  // namespace dln
