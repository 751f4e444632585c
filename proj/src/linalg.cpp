#include "dln/linalg.hpp"

#include "dln/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dln {
namespace {

int rank_from_singular_values(const Vector& s, double tol) {
  if (s.size() == 0) return 0;
  const double cutoff = tol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++r;
  }
  return r;
}

}  // namespace

SubspaceBasis kernel_basis(const Matrix& a, double tol) {
  const int d = static_cast<int>(a.cols());
  if (a.rows() == 0) return {d, Matrix::Identity(d, d)};
  // Pad with zero rows so that the SVD always yields a full d x d V.
  Matrix padded = a;
  if (a.rows() < a.cols()) {
    padded = Matrix::Zero(a.cols(), a.cols());
    padded.topRows(a.rows()) = a;
  }
  Eigen::JacobiSVD<Matrix> svd(padded, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), tol);
  return {d, svd.matrixV().rightCols(d - r)};
}

int numerical_rank(const Matrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Vector least_norm_solution(const Matrix& a, const Vector& y, double tol) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(kDefaultRankTol);
  Vector x = cod.solve(y);
  const double residual = (a * x - y).norm();
  if (residual > tol * (1.0 + y.norm())) {
    throw Infeasible("least-squares residual " + std::to_string(residual) +
                     " exceeds tolerance; a x = y has no solution");
  }
  return x;
}

SubspaceBasis orthonormalize(const Matrix& columns, double tol) {
  const int d = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return SubspaceBasis::empty(d);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const int r = rank_from_singular_values(svd.singularValues(), tol);
  return {d, svd.matrixU().leftCols(r)};
}

double spectral_norm(const Matrix& a, int iterations) {
  if (a.size() == 0) return 0.0;
  Vector v = Vector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double sigma = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vector w = a.transpose() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - sigma) <= 1e-12 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

Vector restrict(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
  return out;
}

IndexSet complement(const IndexSet& idx, int d) {
  std::vector<bool> in(static_cast<std::size_t>(d), false);
  for (int i : idx) in[static_cast<std::size_t>(i)] = true;
  IndexSet out;
  for (int i = 0; i < d; ++i) {
    if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

}  // namespace dln
