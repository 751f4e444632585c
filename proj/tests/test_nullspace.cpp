#include "dln/errors.hpp"
#include "dln/nullspace.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dln;

namespace {

struct Ratios {
  double rho = 0, rho_minus = 0, rho_tilde = 0;
};

Ratios ratios_of(const Vector& n, const IndexSet& s, const SignVector& sign) {
  const IndexSet off = complement(s, static_cast<int>(n.size()));
  double denom = 0;
  for (int i : off) denom += std::abs(n(i));
  Ratios r;
  for (int i : s) {
    r.rho -= sign(i) * n(i);
    r.rho_tilde += std::abs(n(i));
    if (sign(i) * n(i) < 0) r.rho_minus += std::abs(n(i));
  }
  r.rho /= denom;
  r.rho_minus /= denom;
  r.rho_tilde /= denom;
  return r;
}

// Brute force over directions of a 1- or 2-dimensional search space.
Ratios grid_oracle(const SubspaceBasis& b, const IndexSet& s, const SignVector& sign, int samples) {
  Ratios best;
  const double pi = std::acos(-1.0);
  for (int k = 0; k < samples; ++k) {
    Vector n;
    if (b.dim() == 1) {
      n = (k % 2 == 0 ? 1.0 : -1.0) * b.column(0);
    } else {
      const double t = 2 * pi * k / samples;
      n = std::cos(t) * b.column(0) + std::sin(t) * b.column(1);
    }
    const Ratios r = ratios_of(n, s, sign);
    best.rho = std::max(best.rho, r.rho);
    best.rho_minus = std::max(best.rho_minus, r.rho_minus);
    best.rho_tilde = std::max(best.rho_tilde, r.rho_tilde);
  }
  return best;
}

}  // namespace

TEST_CASE("constants for A = [1, 2]") {
  Matrix a(1, 2);
  a << 1, 2;
  SignVector sign(2);
  sign << 0, 1;
  Vector g(2);
  g << 0.5, 1.0;
  const Decomposition dec = decompose(a, {1}, sign, g, 2);
  CHECK(dec.tangent.is_empty());
  CHECK(dec.complement.dim() == 1);
  const NspConstants c = compute_constants(dec.complement, {1}, sign, g);
  CHECK(c.rho == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(c.rho_minus == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(c.rho_tilde == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(c.kappa_star == doctest::Approx(1.0));
  CHECK(c.exact);
  CHECK(std::abs(c.attainer_rho(0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("A = [1, 1]: kernel is tangent, complement is trivial") {
  Matrix a(1, 2);
  a << 1, 1;
  SignVector sign(2);
  sign << 1, 1;
  Vector g(2);
  g << 1.0, 1.0;
  for (int depth : {2, 3}) {
    const Decomposition dec = decompose(a, {0, 1}, sign, g, depth);
    CHECK(dec.tangent.dim() == 1);
    CHECK(dec.complement.is_empty());
    const NspConstants c = compute_constants(dec.complement, {0, 1}, sign, g);
    CHECK(c.rho == 0.0);
    CHECK(c.rho_tilde == 0.0);
    CHECK(c.exact);
  }
}

TEST_CASE("vanishing weight and vanishing S^c part are rejected") {
  Matrix a(1, 3);
  a << 1, 1, 1;
  SignVector sign(3);
  sign << 1, 1, 0;
  Vector g(3);
  g << 1.0, 0.0, 0.5;
  CHECK_THROWS_AS(decompose(a, {0, 1}, sign, g, 2), DegenerateWeights);
  g << 1.0, 1.0, 0.5;
  const SubspaceBasis k = kernel_basis(a);
  CHECK_THROWS_AS(compute_constants(k, {0, 1}, sign, g), DegenerateSupport);
}

TEST_CASE("weight exponent") {
  CHECK(weight_exponent_for_depth(2) == 1.0);
  CHECK(weight_exponent_for_depth(3) == doctest::Approx(4.0 / 3.0));
  CHECK(weight_exponent_for_depth(4) == doctest::Approx(1.5));
}

TEST_CASE("decomposition properties on random instances") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 3, d = m + 4;
    Matrix a(m, d);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
    // Duplicate columns make the tangent space nontrivial.
    a.col(1) = a.col(0);
    a.col(2) = -a.col(0);
    SignVector sign = SignVector::Zero(d);
    sign(0) = 1; sign(1) = 1; sign(2) = -1;
    const IndexSet s{0, 1, 2};
    Vector g(d);
    for (int i = 0; i < d; ++i) g(i) = ud(rng);
    const int depth = 2 + trial % 3;
    const Decomposition dec = decompose(a, s, sign, g, depth);
    CHECK(dec.tangent.dim() + dec.complement.dim() == dec.kernel.dim());
    if (!dec.tangent.is_empty()) {
      CHECK((a * dec.tangent.vectors).norm() < 1e-10);
      for (int j = 0; j < dec.tangent.dim(); ++j) {
        const Vector t = dec.tangent.column(j);
        double dot = 0;
        for (int i : s) dot += sign(i) * t(i);
        CHECK(std::abs(dot) < 1e-10);
        CHECK(restrict(t, complement(s, d)).norm() < 1e-10);
        for (int k = 0; k < dec.complement.dim(); ++k) {
          const Vector n = dec.complement.column(k);
          double w = 0;
          for (int i : s) w += t(i) * n(i) / std::pow(std::abs(g(i)), dec.weight_exponent);
          CHECK(std::abs(w) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("LP constants match a direction grid") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int kdim = 1 + trial % 2;
    const int d = 5 + trial % 3;
    const int m = d - kdim;
    Matrix a(m, d);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
    const SubspaceBasis k = kernel_basis(a);
    REQUIRE(k.dim() == kdim);
    IndexSet s{0, 1, 2};
    SignVector sign = SignVector::Zero(d);
    for (int i : s) sign(i) = (rng() & 1) ? 1 : -1;
    const Vector g = Vector::Ones(d);
    const NspConstants c = compute_constants(k, s, sign, g, 16, 2);
    const Ratios o = grid_oracle(k, s, sign, kdim == 1 ? 2 : 100000);
    const double tol = kdim == 1 ? 1e-9 : 1e-3;
    CHECK(c.rho == doctest::Approx(o.rho).epsilon(tol).scale(1.0));
    CHECK(c.rho_minus == doctest::Approx(o.rho_minus).epsilon(tol).scale(1.0));
    CHECK(c.rho_tilde == doctest::Approx(o.rho_tilde).epsilon(tol).scale(1.0));
    // No grid direction may beat the LP value.
    CHECK(o.rho <= c.rho + 1e-8);
    CHECK(o.rho_minus <= c.rho_minus + 1e-8);
    CHECK(o.rho_tilde <= c.rho_tilde + 1e-8);
    // The attainer lies in the search space and attains rho.
    CHECK((a * c.attainer_rho).norm() < 1e-9);
    CHECK(ratios_of(c.attainer_rho, s, sign).rho == doctest::Approx(c.rho).epsilon(1e-8).scale(1.0));
    CHECK(c.rho <= c.rho_minus + 1e-12);
    CHECK(c.rho_minus <= c.rho_tilde + 1e-12);
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("constants are invariant under scaling the basis and the weights") {
  Matrix a(2, 5);
  a << 1, 0.3, -0.7, 2, 0.1,
       0.4, -1, 0.5, 0.2, 1.3;
  const SubspaceBasis k = kernel_basis(a);
  SignVector sign = SignVector::Zero(5);
  sign(0) = 1; sign(3) = -1;
  Vector g(5);
  g << 0.5, 1, 1, 2, 1;
  const NspConstants c1 = compute_constants(k, {0, 3}, sign, g);
  SubspaceBasis k2 = k;
  k2.vectors *= -3.0;
  const NspConstants c2 = compute_constants(k2, {0, 3}, sign, Vector(7.0 * g));
  CHECK(c1.rho == doctest::Approx(c2.rho).epsilon(1e-8));
  CHECK(c1.rho_tilde == doctest::Approx(c2.rho_tilde).epsilon(1e-8));
  CHECK(c1.rho_minus == doctest::Approx(c2.rho_minus).epsilon(1e-8));
  CHECK(c1.kappa_star == doctest::Approx(4.0));
}

TEST_CASE("pattern ascent above the cap gives lower bounds") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  const int d = 10;
  Matrix a(7, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  const SubspaceBasis k = kernel_basis(a);
  IndexSet s{0, 1, 2, 3, 4};
  SignVector sign = SignVector::Zero(d);
  sign << 1, -1, 1, 1, -1, 0, 0, 0, 0, 0;
  const Vector g = Vector::Ones(d);
  const NspConstants exact = compute_constants(k, s, sign, g, 16);
  const NspConstants approx = compute_constants(k, s, sign, g, 2);
  CHECK(exact.exact);
  CHECK_FALSE(approx.exact);
  CHECK(approx.rho == doctest::Approx(exact.rho).epsilon(1e-8));
  CHECK(approx.rho_tilde <= exact.rho_tilde + 1e-8);
  CHECK(approx.rho_minus <= exact.rho_minus + 1e-8);
  CHECK(approx.rho_tilde >= 0.5 * exact.rho_tilde);
}
