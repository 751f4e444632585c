#pragma once

#include <Eigen/Dense>

#include <vector>

namespace dln {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SignVector = Eigen::VectorXi;
using IndexSet = std::vector<int>;

/// Orthonormal basis of a subspace of R^ambient_dim, stored as matrix columns.
struct SubspaceBasis {
  int ambient_dim = 0;
  Matrix vectors;  // ambient_dim x dim

  SubspaceBasis() = default;
  SubspaceBasis(int ambient, Matrix columns)
      : ambient_dim(ambient), vectors(std::move(columns)) {}

  static SubspaceBasis empty(int ambient) { return {ambient, Matrix(ambient, 0)}; }

  int dim() const { return static_cast<int>(vectors.cols()); }
  bool is_empty() const { return vectors.cols() == 0; }
  Vector column(int j) const { return vectors.col(j); }
};

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// Numerical null space of `a` from a full SVD. Singular values below
/// tol * sigma_max count as zero.
SubspaceBasis kernel_basis(const Matrix& a, double tol = kDefaultRankTol);

/// Numerical rank with the same cutoff rule as kernel_basis.
int numerical_rank(const Matrix& a, double tol = kDefaultRankTol);

/// Minimum Euclidean norm solution of a x = y. Throws Infeasible when the
/// least-squares residual exceeds tol * (1 + |y|_2).
Vector least_norm_solution(const Matrix& a, const Vector& y,
                           double tol = kDefaultFeasibilityTol);

/// Orthonormal basis of the span of the given columns (rank-revealing).
SubspaceBasis orthonormalize(const Matrix& columns, double tol = kDefaultRankTol);

/// Largest singular value estimated by power iteration on a^T a.
double spectral_norm(const Matrix& a, int iterations = 200);

/// Restriction of v to the given index set, in index order.
Vector restrict(const Vector& v, const IndexSet& idx);

/// Complement of idx in {0, ..., d-1}.
IndexSet complement(const IndexSet& idx, int d);

}  // namespace dln
