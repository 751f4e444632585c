#include "dln/bounds.hpp"

#include "dln/errors.hpp"
#include "dln/lp.hpp"
#include "dln/potentials.hpp"

#include <cmath>

namespace dln {
namespace {

// |S^c| = 0 is meaningful only without uniqueness (then N = {0} and the
// constants vanish).
void validate(const BoundInput& in, bool deep, bool unique = true) {
  if (in.support.empty()) throw InvalidParameters("support must be nonempty");
  if (in.off_count() < (unique ? 1 : 0)) throw InvalidParameters("S^c must be nonempty");
  if (!(in.alpha > 0.0)) throw InvalidParameters("alpha must be positive");
  if (deep ? in.depth < 3 : in.depth != 2) throw InvalidParameters("depth does not match the regime");
  if (!(in.min_s() > 0.0)) throw InvalidParameters("g* vanishes on S");
}

// a / b with 0 / 0 and x / 0 read as +inf.
double ratio_or_inf(double a, double b) { return b == 0.0 ? kInf : a / b; }

Condition make(std::string name, double lhs, double rhs) {
  return Condition{std::move(name), lhs, rhs, lhs <= rhs};
}

void finish(BoundReport& r, const BoundInput& in) {
  r.assumptions_ok = true;
  for (const auto& c : r.conditions) r.assumptions_ok = r.assumptions_ok && c.holds;
  r.inexact_constants = !in.constants.exact;
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::ShallowUnique: return "shallow_unique";
    case Regime::DeepUnique: return "deep_unique";
    case Regime::ShallowNonUnique: return "shallow_nonunique";
    case Regime::DeepNonUnique: return "deep_nonunique";
  }
  return "unknown";
}

double BoundInput::min_s() const {
  double m = kInf;
  for (int i : support) m = std::min(m, std::abs(gstar(i)));
  return m;
}

double BoundInput::max_s() const {
  double m = 0.0;
  for (int i : support) m = std::max(m, std::abs(gstar(i)));
  return m;
}

BoundReport bound_shallow_unique(const BoundInput& in) {
  validate(in, false);
  const auto& c = in.constants;
  const double mn = in.min_s();
  const double eps = in.alpha / mn;
  const double sc = in.off_count();
  const double kappa_m = std::pow(c.kappa_star, c.rho_minus);
  BoundReport r;
  r.regime = Regime::ShallowUnique;
  r.upper = std::pow(in.alpha, 1.0 - c.rho) * sc * (1.0 + c.rho_tilde) * std::pow(mn, c.rho) * kappa_m *
            std::pow(1.0 + eps * eps, c.rho);
  const double rhs = std::pow(ratio_or_inf(1.0, 4.0 * c.rho_tilde * kappa_m * sc), 1.0 / (1.0 - c.rho));
  r.conditions.push_back(make("lower", eps, rhs));
  const double paren = 1.0 - 8.0 * c.rho_tilde * c.rho_tilde * sc * kappa_m * std::pow(eps, 1.0 - c.rho) -
                       std::pow(c.kappa_star, 2.0 * c.rho_minus - 2.0 * c.rho) * std::pow(eps, 2.0 * c.rho);
  r.lower = std::pow(in.alpha, 1.0 - c.rho) * std::pow(in.linf(), c.rho) / kappa_m * paren;
  r.lower_vacuous = paren <= 0.0;
  finish(r, in);
  return r;
}

BoundReport bound_deep_unique(const BoundInput& in) {
  validate(in, true);
  const auto& c = in.constants;
  const double g = in.gamma();
  const double eps = in.alpha / in.min_s();
  const double sc = in.off_count();
  const double hd = deep_h(in.depth, c.rho);
  const double lead = std::pow(1.0 - c.rho, 1.0 / g + 1.0);
  BoundReport r;
  r.regime = Regime::DeepUnique;
  r.upper = in.alpha * sc * (1.0 + c.rho_tilde) *
            (hd + 4.0 * c.rho_minus / (g * lead) * std::pow(eps, g));
  const double upper_rhs = std::pow(ratio_or_inf((1.0 - c.rho) * g, 4.0 * c.rho_minus), 1.0 / g);
  r.conditions.push_back(Condition{"upper", eps, upper_rhs, eps < upper_rhs});
  const double mix = c.rho + std::pow(2.0, 2.0 + g) * c.rho_tilde * g * c.kappa_star;
  const double third = mix == 0.0 ? kInf : std::pow(c.rho / mix, 1.0 / g);
  const double second = std::pow(1.0 - c.rho, 1.0 / g) / (4.0 * (1.0 + c.rho_tilde) * sc);
  r.conditions.push_back(make("lower", eps, std::min({upper_rhs, second, third})));
  const double lower_ratio = hd - 2.0 * mix / (g * lead) * std::pow(eps, g);
  r.lower = in.alpha * lower_ratio;
  r.lower_vacuous = lower_ratio < 0.0;
  finish(r, in);
  return r;
}

BoundReport bound_shallow_nonunique(const BoundInput& in) {
  validate(in, false, false);
  const auto& c = in.constants;
  const double mn = in.min_s();
  const double eps = in.alpha / mn;
  const double sc = in.off_count();
  const double l1 = in.l1();
  const double kappa_m = std::pow(c.kappa_star, c.rho_minus);
  BoundReport r;
  r.regime = Regime::ShallowNonUnique;
  r.conditions.push_back(make("eps_squared", eps * eps, mn / (20.0 * l1)));
  r.conditions.push_back(make("eps_1_minus_rho", std::pow(eps, 1.0 - c.rho),
                              ratio_or_inf(1.0, 4.0 * std::pow(2.0, c.rho_minus) * c.rho_tilde * sc * kappa_m)));
  r.conditions.push_back(make("eps_1_plus_rho", std::pow(eps, 1.0 + c.rho),
                              c.rho_tilde * kappa_m * sc * mn / (4.0 * l1)));
  const double c1 = 32.0 * c.rho_tilde * c.rho_tilde * sc * kappa_m * l1 / mn;
  const double g_alpha = std::pow(1.0 + 10.0 * in.alpha * in.alpha * l1 / (mn * mn * mn), c.rho_minus);
  r.upper = std::pow(in.alpha, 1.0 - c.rho) * (1.0 + c.rho_tilde + c1 * std::pow(eps, 1.0 - c.rho)) * sc *
                std::pow(mn, c.rho) * kappa_m * g_alpha +
            2.0 * in.alpha * in.alpha * l1 / (mn * mn);
  finish(r, in);
  return r;
}

BoundReport bound_deep_nonunique(const BoundInput& in) {
  validate(in, true, false);
  const auto& c = in.constants;
  const double g = in.gamma();
  const double mn = in.min_s();
  const double eps = in.alpha / mn;
  const double sc = in.off_count();
  const double hd = deep_h(in.depth, c.rho);
  const double lead = std::pow(1.0 - c.rho, 1.0 / g + 1.0);
  const double mass = std::pow(in.l1() / mn, 1.0 + g);
  BoundReport r;
  r.regime = Regime::DeepNonUnique;
  const double rhs = std::min({0.125 * std::pow(mn / in.l1(), 1.0 + g),
                               0.5 * std::pow(ratio_or_inf(lead * g, 4.0 * c.rho_minus), 1.0 / g),
                               ratio_or_inf(1.0, 8.0 * c.rho_tilde * sc * (hd + 1.0))});
  r.conditions.push_back(make("eps", eps, rhs));
  const double c_sharp = 5.0 * c.rho_tilde * (88.0 * mass + 512.0 * c.rho_tilde * sc * (hd + 1.0)) *
                         std::pow(2.0 * in.d * in.linf() / mn, 1.0 + g);
  const double g_eps = c_sharp * eps * sc * (hd + 4.0 * std::pow(2.0, g) * c.rho_minus * std::pow(eps, g) / (g * lead)) +
                       10.0 * eps * mass;
  r.upper = in.alpha * ((1.0 + c.rho_tilde) * sc * hd + mass + g_eps);
  finish(r, in);
  return r;
}

BoundReport evaluate_bounds(const BoundInput& in, bool unique) {
  if (in.depth == 2) return unique ? bound_shallow_unique(in) : bound_shallow_nonunique(in);
  return unique ? bound_deep_unique(in) : bound_deep_nonunique(in);
}

}  // namespace dln
