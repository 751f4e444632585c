#include "dln/report.hpp"

#include "dln/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dln {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// JSON cannot hold inf; it is written as the string "inf".
Json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string csv_string(const SweepResult& result) {
  std::string out = "alpha,depth,err_l1,err_linf_sc,est_err_l2,iterations,upper_bound,lower_bound\n";
  for (const auto& r : result.rows) {
    if (r.failed) continue;
    out += num(r.alpha) + ',' + std::to_string(r.depth) + ',' + num(r.err_l1) + ',' + num(r.err_linf_sc) + ',' +
           opt(r.est_err_l2) + ',' + std::to_string(r.iterations) + ',' + opt(r.upper_bound) + ',' +
           opt(r.lower_bound) + '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) { write_text(path, csv_string(result)); }

std::string svg_string(const std::vector<SweepResult>& results) {
  if (results.empty()) throw InvalidParameters("no series to plot");
  const double w = 640, h = 440, left = 70, right = 160, top = 20, bottom = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& res : results) {
    for (const auto& r : res.rows) {
      if (r.failed || !(r.err_l1 > 0.0)) continue;
      xmin = std::min(xmin, std::log10(r.alpha));
      xmax = std::max(xmax, std::log10(r.alpha));
      ymin = std::min(ymin, std::log10(r.err_l1));
      ymax = std::max(ymax, std::log10(r.err_l1));
    }
  }
  if (xmin > xmax) xmin = -1, xmax = 0, ymin = -1, ymax = 0;
  xmin = std::floor(xmin), xmax = std::ceil(xmax), ymin = std::floor(ymin), ymax = std::ceil(ymax);
  if (xmax == xmin) xmax += 1;
  if (ymax == ymin) ymax += 1;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
    << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int xstep = std::max(1, static_cast<int>((xmax - xmin) / 12) + 1);
  for (int e = static_cast<int>(xmin); e <= static_cast<int>(xmax); e += xstep) {
    s << "<line x1=\"" << fixed(px(e), 2) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(px(e), 2) << "\" y2=\""
      << top + ph + 5 << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed(px(e), 2) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << e
      << "</text>\n";
  }
  const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 10) + 1);
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
    s << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(e), 2) << "\" x2=\"" << left << "\" y2=\""
      << fixed(py(e), 2) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << left - 8 << "\" y=\"" << fixed(py(e) + 4, 2) << "\" text-anchor=\"end\">1e" << e
      << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">alpha</text>\n"
    << "<text x=\"15\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
    << top + ph / 2 << ")\">l1 error</text>\n";
  for (std::size_t k = 0; k < results.size(); ++k) {
    const char* color = colors[k % 8];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : results[k].rows) {
      if (r.failed || !(r.err_l1 > 0.0)) continue;
      s << (first ? "" : " ") << fixed(px(std::log10(r.alpha)), 2) << ',' << fixed(py(std::log10(r.err_l1)), 2);
      first = false;
    }
    s << "\"/>\n";
    const double ly = top + 15 + 18 * static_cast<double>(k);
    std::string label = results[k].label.empty() ? "series " + std::to_string(k + 1) : results[k].label;
    s << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << xml_escape(label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const std::vector<SweepResult>& results, const std::string& path) {
  write_text(path, svg_string(results));
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Instance& inst) {
  Json j;
  j["dims"] = {inst.rows(), inst.cols()};
  Json a = Json::array();
  for (int i = 0; i < inst.rows(); ++i) {
    for (int k = 0; k < inst.cols(); ++k) a.push_back(inst.a(i, k));
  }
  j["A"] = a;
  j["y"] = to_json(inst.y);
  j["x_true"] = inst.x_true ? to_json(*inst.x_true) : Json(nullptr);
  j["eta"] = inst.eta;
  j["seed"] = inst.seed;
  j["sparsity"] = inst.sparsity;
  return j;
}

Json to_json(const L1Certificate& c) {
  Json j;
  j["minimizer"] = to_json(c.minimizer);
  j["value"] = c.value;
  j["support"] = c.support;
  Json s = Json::array();
  for (Eigen::Index i = 0; i < c.sign.size(); ++i) s.push_back(c.sign(i));
  j["sign"] = s;
  j["unique"] = c.unique;
  j["support_is_lmin_support"] = c.support_is_lmin_support;
  return j;
}

Json to_json(const NspConstants& c) {
  Json j;
  j["rho"] = c.rho;
  j["rho_minus"] = c.rho_minus;
  j["rho_tilde"] = c.rho_tilde;
  j["kappa_star"] = c.kappa_star;
  j["attainer_rho"] = to_json(c.attainer_rho);
  j["exact"] = c.exact;
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["regime"] = regime_name(r.regime);
  j["assumptions_ok"] = r.assumptions_ok;
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"name", c.name}, {"lhs", real(c.lhs)}, {"rhs", real(c.rhs)}, {"holds", c.holds}});
  }
  j["conditions"] = conds;
  j["upper"] = real(r.upper);
  j["lower"] = r.lower ? real(*r.lower) : Json(nullptr);
  j["lower_vacuous"] = r.lower_vacuous;
  j["inexact_constants"] = r.inexact_constants;
  return j;
}

Json to_json(const SolveTrace& t) {
  Json j;
  j["final_x"] = to_json(t.final_x);
  j["final_loss"] = t.final_loss;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["polished"] = t.polished;
  Json hist = Json::array();
  for (const auto& [it, loss] : t.loss_history) hist.push_back({it, loss});
  j["loss_history"] = hist;
  return j;
}

Json sweep_summary(const SweepResult& r) {
  Json j;
  j["label"] = r.label;
  j["unique"] = r.unique;
  j["fitted"] = r.fitted;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r_squared"] = r.r_squared;
  j["slope_window"] = {r.slope_window.first, r.slope_window.second};
  if (r.constants) {
    j["constants"] = {{"rho", r.constants->rho},
                      {"rho_minus", r.constants->rho_minus},
                      {"rho_tilde", r.constants->rho_tilde},
                      {"kappa_star", r.constants->kappa_star},
                      {"exact", r.constants->exact}};
  } else {
    j["constants"] = nullptr;
  }
  Json failed = Json::array();
  for (const auto& row : r.rows) {
    if (row.failed) failed.push_back({{"alpha", row.alpha}, {"error", row.failure}});
  }
  j["failed_rows"] = failed;
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw IoError("expected a numeric array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw IoError("expected a numeric array");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Instance instance_from_json(const Json& j) {
  try {
    Instance inst;
    const int n = j.at("dims").at(0).get<int>();
    const int d = j.at("dims").at(1).get<int>();
    const Vector flat = vector_from_json(j.at("A"));
    if (n < 1 || d < 1 || flat.size() != static_cast<Eigen::Index>(n) * d) {
      throw InvalidDims("A does not match dims");
    }
    inst.a.resize(n, d);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) inst.a(i, k) = flat(static_cast<Eigen::Index>(i) * d + k);
    }
    inst.y = vector_from_json(j.at("y"));
    if (inst.y.size() != n) throw InvalidDims("y does not match dims");
    if (j.contains("x_true") && !j["x_true"].is_null()) {
      inst.x_true = vector_from_json(j["x_true"]);
      if (inst.x_true->size() != d) throw InvalidDims("x_true does not match dims");
    }
    inst.eta = j.value("eta", 0.0);
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.sparsity = j.value("sparsity", 0);
    return inst;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed instance: ") + e.what());
  }
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace dln
