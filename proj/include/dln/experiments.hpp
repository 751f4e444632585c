#pragma once

#include "dln/bounds.hpp"
#include "dln/l1.hpp"
#include "dln/linalg.hpp"
#include "dln/solvers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dln {

/// xoshiro256** seeded through SplitMix64; normals by Box-Muller.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();
  int below(int n);  // uniform on {0, ..., n-1}

 private:
  std::uint64_t s_[4];
  std::optional<double> spare_;
};

struct Instance {
  Matrix a;
  Vector y;
  std::optional<Vector> x_true;
  double eta = 0.0;
  std::uint64_t seed = 0;
  int sparsity = 0;
  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

/// Gaussian A, s-sparse x_true with magnitudes uniform on [1, 2] and random
/// signs, y = A x_true + eta |A x_true|_2 * (unit Gaussian direction).
Instance generate_instance(int rows, int cols, int sparsity, double eta, std::uint64_t seed);

/// l1 certificate plus the selected minimiser g* (Frank-Wolfe selection by
/// depth when the minimiser is not unique).
struct Anchor {
  L1Certificate cert;
  Vector gstar;
};

Anchor anchor_point(const Matrix& a, const Vector& y, int depth, int threads = 1);

/// ker A for unique minimisers, otherwise the weighted complement of the tangent space.
SubspaceBasis search_space(const Matrix& a, const Anchor& anchor, int depth);

/// Bound inputs at g*; absent when S^c is empty or g* vanishes on S.
std::optional<BoundInput> bound_input(const Anchor& anchor, const NspConstants& c, int depth);

struct SweepRow {
  double alpha = 0.0;
  int depth = 2;
  double err_l1 = 0.0;
  double err_linf_sc = 0.0;
  std::optional<double> est_err_l2;
  long iterations = 0;
  std::optional<double> upper_bound;
  std::optional<double> lower_bound;
  bool used_oracle = false;
  bool failed = false;
  std::string failure;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> slope_window{0.0, 0.0};  // (alpha_lo, alpha_hi)
  bool fitted = false;
  bool unique = true;
  bool constants_exact = true;
  std::optional<NspConstants> constants;
  Vector gstar;
  std::string label;
};

struct SweepOptions {
  bool with_bounds = true;
  int threads = 1;
  int constants_cap = 16;
  /// Explicit (alpha_lo, alpha_hi) fit window; automatic when absent.
  std::optional<std::pair<double, double>> window;
};

/// One limit point per alpha (mirror descent, or the exact oracle on
/// one-dimensional kernels), errors against the selected l1 minimiser, bounds
/// and a log-log slope fit.
SweepResult run_sweep(const Instance& inst, int depth, const std::vector<double>& alphas,
                      const SolveConfig& cfg, const SweepOptions& opts = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// OLS of log err on log alpha.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& rows);

/// Smallest four alphas whose error clears 1e3 * eps * |g*|_1.
std::vector<std::pair<double, double>> default_window(const std::vector<SweepRow>& rows, double gstar_l1);

/// Step for mirror descent that stays contractive when |x_i| reaches scale.
double safe_step(const Matrix& a, double scale, int depth);

void emit_csv(const SweepResult& result, const std::string& path);
std::string csv_string(const SweepResult& result);
void emit_svg(const std::vector<SweepResult>& results, const std::string& path);
std::string svg_string(const std::vector<SweepResult>& results);

}  // namespace dln
