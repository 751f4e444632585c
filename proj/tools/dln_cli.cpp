// Command-line front end: gen, l1, constants, bounds, solve, sweep, sharpness.
#include "dln/errors.hpp"
#include "dln/experiments.hpp"
#include "dln/potentials.hpp"
#include "dln/report.hpp"
#include "dln/sharpness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

using namespace dln;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::vector<int> depth{2};
  std::vector<double> alpha;
  std::optional<double> tol;
  std::string out;
  bool paper_scale = false;
  int threads = 1;
  // instance source
  std::string instance;
  int rows = 0, cols = 0, sparsity = -1;
  double eta = 0.0;
};

void add_common(CLI::App* app, Common& c, bool depth_list = false) {
  app->add_option("--seed", c.seed, "random seed");
  auto* d = app->add_option("--depth", c.depth, depth_list ? "network depth(s), comma separated" : "network depth");
  d->delimiter(',');
  if (!depth_list) d->expected(1);
  app->add_option("--alpha", c.alpha, "initialisation scale(s), comma separated")->delimiter(',');
  app->add_option("--tol", c.tol, "solver tolerance");
  app->add_option("--out", c.out, "output path (stdout when omitted)");
  app->add_flag("--paper-scale", c.paper_scale, "60 x 300 instances with sparsity 5");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

void add_instance_source(CLI::App* app, Common& c) {
  app->add_option("--instance", c.instance, "instance JSON written by gen (generated from --seed otherwise)");
  app->add_option("--rows", c.rows, "number of measurements N");
  app->add_option("--cols", c.cols, "dimension d");
  app->add_option("--sparsity", c.sparsity, "nonzeros of the ground truth");
  app->add_option("--eta", c.eta, "noise level");
}

Instance load_instance(const Common& c) {
  if (!c.instance.empty()) return instance_from_json(read_json(c.instance));
  const int rows = c.rows > 0 ? c.rows : (c.paper_scale ? 60 : 30);
  const int cols = c.cols > 0 ? c.cols : (c.paper_scale ? 300 : 100);
  const int s = c.sparsity >= 0 ? c.sparsity : (c.paper_scale ? 5 : 3);
  return generate_instance(rows, cols, s, c.eta, c.seed);
}

int depth_of(const Common& c) {
  if (c.depth.size() != 1 || c.depth[0] < 2) throw InvalidParameters("--depth must be a single integer >= 2");
  return c.depth[0];
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
  }
}

void emit(const Common& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

std::vector<double> default_alphas() {
  std::vector<double> a;
  for (int i = 0; i <= 11; ++i) a.push_back(std::pow(10.0, -i));
  return a;
}

int cmd_gen(const Common& c) {
  emit(c, to_json(load_instance(c)));
  return 0;
}

int cmd_l1(const Common& c) {
  const Instance inst = load_instance(c);
  const L1Certificate cert = certify_l1(inst.a, inst.y, c.threads);
  emit(c, to_json(cert));
  return 0;
}

int cmd_constants(const Common& c, int cap) {
  const Instance inst = load_instance(c);
  const int depth = depth_of(c);
  const Anchor anchor = anchor_point(inst.a, inst.y, depth, c.threads);
  const SubspaceBasis search = search_space(inst.a, anchor, depth);
  Json j = to_json(compute_constants(search, anchor.cert.support, anchor.cert.sign, anchor.gstar, cap, c.threads));
  j["unique"] = anchor.cert.unique;
  j["support"] = anchor.cert.support;
  j["search_dim"] = search.dim();
  emit(c, j);
  return 0;
}

int cmd_bounds(const Common& c, int cap) {
  if (c.alpha.empty()) throw InvalidParameters("--alpha is required");
  const Instance inst = load_instance(c);
  const int depth = depth_of(c);
  const Anchor anchor = anchor_point(inst.a, inst.y, depth, c.threads);
  const SubspaceBasis search = search_space(inst.a, anchor, depth);
  const NspConstants k = compute_constants(search, anchor.cert.support, anchor.cert.sign, anchor.gstar, cap, c.threads);
  const auto base = bound_input(anchor, k, depth);
  if (!base) throw DegenerateSupport("bounds need a nonempty S^c and g* nonzero on S");
  Json j;
  j["constants"] = to_json(k);
  Json reports = Json::array();
  for (double a : c.alpha) {
    BoundInput in = *base;
    in.alpha = a;
    Json r = to_json(evaluate_bounds(in, anchor.cert.unique));
    r["alpha"] = a;
    reports.push_back(r);
  }
  j["reports"] = reports;
  emit(c, j);
  return 0;
}

int cmd_solve(const Common& c, long max_iters, bool polish) {
  if (c.alpha.size() != 1) throw InvalidParameters("solve takes exactly one --alpha");
  const Instance inst = load_instance(c);
  const int depth = depth_of(c);
  SolveConfig cfg;
  if (c.tol) cfg.loss_tol = *c.tol;
  cfg.max_iters = max_iters;
  cfg.newton_polish = polish;
  const L1Certificate cert = basis_pursuit(inst.a, inst.y);
  cfg.step_init = safe_step(inst.a, cert.minimizer.lpNorm<Eigen::Infinity>(), depth);
  const SolveTrace tr = mirror_descent(inst.a, inst.y, Potential::for_depth(depth, c.alpha[0]), cfg);
  Json j = to_json(tr);
  j["alpha"] = c.alpha[0];
  j["depth"] = depth;
  emit(c, j);
  return tr.converged ? 0 : 3;
}

int cmd_sweep(const Common& c, const std::string& svg, bool bounds, long max_iters) {
  const Instance inst = load_instance(c);
  const std::vector<double> alphas = c.alpha.empty() ? default_alphas() : c.alpha;
  SolveConfig cfg;
  if (c.tol) cfg.loss_tol = *c.tol;
  cfg.max_iters = max_iters;
  cfg.newton_polish = true;
  SweepOptions opts;
  opts.threads = c.threads;
  opts.with_bounds = bounds;
  std::vector<SweepResult> results;
  SweepResult all;
  for (int depth : c.depth) {
    if (depth < 2) throw InvalidParameters("depths must be >= 2");
    SweepResult r = run_sweep(inst, depth, alphas, cfg, opts);
    char label[64];
    std::snprintf(label, sizeof label, "D=%d eta=%g", depth, inst.eta);
    r.label = label;
    all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    Json s = sweep_summary(r);
    std::cerr << s.dump() << "\n";
    results.push_back(std::move(r));
  }
  emit(c, csv_string(all));
  if (!svg.empty()) emit_svg(results, svg);
  return 0;
}

struct SharpArgs {
  double rho = 0.5, rho_minus = 0.5, kappa = 2.0, gamma1 = 0.0;
  int d = 5;
  std::string variant = "upper";
};

int cmd_sharpness(const Common& c, const SharpArgs& s) {
  const int depth = depth_of(c);
  std::vector<double> alphas = c.alpha;
  if (alphas.empty()) alphas = depth == 2 ? std::vector<double>{1e-6, 1e-7, 1e-8} : std::vector<double>{1e-8, 1e-10, 1e-12};
  SharpInstance inst;
  double target = 0.0, power = 0.0;
  const int off = s.d - 2;
  bool use_l1 = false;
  if (depth == 2) {
    if (s.variant != "upper" && s.variant != "lower") throw InvalidParameters("--variant is upper or lower");
    const bool upper = s.variant == "upper";
    inst = build_sharp_shallow(s.d, s.rho, s.rho_minus, s.kappa, upper ? SharpVariant::UpperA : SharpVariant::LowerB);
    const double rt = 2 * s.rho_minus - s.rho;
    // min |g*_S| = 1 in both variants.
    target = upper ? off * (1 + rt) * std::pow(s.kappa, s.rho_minus)
                   : std::pow(s.kappa, s.rho) / std::pow(s.kappa, s.rho_minus);
    use_l1 = upper;
    power = 2 * s.rho;
  } else {
    inst = build_sharp_deep(s.d, s.rho, s.gamma1);
    target = deep_h(depth, s.rho);
    power = static_cast<double>(depth - 2) / depth;
  }
  const double scale_exp = depth == 2 ? 1.0 - s.rho : 1.0;
  std::string csv = "alpha,depth,t,err_l1,err_linf_sc,normalized\n";
  std::vector<double> values;
  char buf[256];
  for (double a : alphas) {
    const double t = depth == 2 ? fixed_point_shallow(inst, a) : fixed_point_deep(inst, depth, a);
    const double l1 = std::abs(t) * inst.n.lpNorm<1>();
    const double linf = std::abs(t) / off;
    const double v = (use_l1 ? l1 : linf) / std::pow(a, scale_exp);
    values.push_back(v);
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", a, depth, t, l1, linf, v);
    csv += buf;
  }
  emit(c, csv);
  const LimitEstimate est = limit_ratio(alphas, values, target, power);
  Json j;
  j["target"] = target;
  j["extrapolated_ratio"] = est.extrapolated;
  j["correction_power"] = power;
  j["quantity"] = use_l1 ? "l1 / alpha^(1-rho)" : (depth == 2 ? "linf_sc / alpha^(1-rho)" : "linf_sc / alpha");
  std::cerr << j.dump() << "\n";
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Assumption: return 2;
    case ErrorKind::Solver: return 3;
    case ErrorKind::Io: return 4;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit points of diagonal linear networks: l1 certificates, null space constants, error bounds, sweeps"};
  app.require_subcommand(1);
  Common c;
  int cap = 16;
  long max_iters = 5'000'000;
  bool polish = false;
  std::string svg;
  bool no_bounds = false;
  SharpArgs sharp;

  auto* gen = app.add_subcommand("gen", "generate a Gaussian instance and write it as JSON");
  add_common(gen, c);
  add_instance_source(gen, c);
  auto* l1 = app.add_subcommand("l1", "basis pursuit with support/sign/uniqueness certificate");
  add_common(l1, c);
  add_instance_source(l1, c);
  auto* constants = app.add_subcommand("constants", "null space constants at the selected l1 minimiser");
  add_common(constants, c);
  add_instance_source(constants, c);
  constants->add_option("--cap", cap, "largest |S| enumerated exactly");
  auto* bounds = app.add_subcommand("bounds", "upper/lower error bounds for each alpha");
  add_common(bounds, c);
  add_instance_source(bounds, c);
  bounds->add_option("--cap", cap, "largest |S| enumerated exactly");
  auto* solve = app.add_subcommand("solve", "one mirror-descent run");
  add_common(solve, c);
  add_instance_source(solve, c);
  solve->add_option("--max-iters", max_iters, "iteration cap");
  solve->add_flag("--polish", polish, "Newton polish on the dual after the loss test passes");
  auto* sweep = app.add_subcommand("sweep", "alpha sweep: CSV of errors and bounds, optional SVG");
  add_common(sweep, c, true);
  add_instance_source(sweep, c);
  sweep->add_option("--svg", svg, "log-log plot path");
  sweep->add_flag("--no-bounds", no_bounds, "skip constants and bounds");
  sweep->add_option("--max-iters", max_iters, "iteration cap per run");
  auto* sharpness = app.add_subcommand("sharpness", "sharpness construction: fixed points and limit table");
  add_common(sharpness, c);
  sharpness->add_option("--d", sharp.d, "dimension (>= 3)");
  sharpness->add_option("--rho", sharp.rho, "rho in [0, 1)");
  sharpness->add_option("--rho-minus", sharp.rho_minus, "rho^- (depth 2)");
  sharpness->add_option("--kappa", sharp.kappa, "condition number of g* (depth 2)");
  sharpness->add_option("--variant", sharp.variant, "upper or lower (depth 2)");
  sharpness->add_option("--gamma1", sharp.gamma1, "first kernel entry (depth >= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(c);
    if (*l1) return cmd_l1(c);
    if (*constants) return cmd_constants(c, cap);
    if (*bounds) return cmd_bounds(c, cap);
    if (*solve) return cmd_solve(c, max_iters, polish);
    if (*sweep) return cmd_sweep(c, svg, !no_bounds, max_iters);
    if (*sharpness) return cmd_sharpness(c, sharp);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}
