#pragma once

#include "dln/nullspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dln {

enum class Regime { ShallowUnique, DeepUnique, ShallowNonUnique, DeepNonUnique };

std::string regime_name(Regime r);

struct BoundInput {
  NspConstants constants;
  Vector gstar;
  IndexSet support;
  int d = 0;
  double alpha = 0.0;
  int depth = 2;

  double min_s() const;
  double max_s() const;
  double l1() const { return gstar.lpNorm<1>(); }
  double linf() const { return gstar.lpNorm<Eigen::Infinity>(); }
  int off_count() const { return d - static_cast<int>(support.size()); }
  double gamma() const { return depth == 2 ? 0.0 : static_cast<double>(depth - 2) / depth; }
};

struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;  // may be +inf
  bool holds = false;
};

struct BoundReport {
  Regime regime = Regime::ShallowUnique;
  bool assumptions_ok = true;
  std::vector<Condition> conditions;
  double upper = 0.0;
  std::optional<double> lower;
  bool lower_vacuous = false;
  bool inexact_constants = false;
};

BoundReport bound_shallow_unique(const BoundInput& in);
BoundReport bound_deep_unique(const BoundInput& in);
BoundReport bound_shallow_nonunique(const BoundInput& in);
BoundReport bound_deep_nonunique(const BoundInput& in);

/// Dispatch on depth and uniqueness.
BoundReport evaluate_bounds(const BoundInput& in, bool unique);

}  // namespace dln
