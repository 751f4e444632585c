#include "dln/errors.hpp"
#include "dln/experiments.hpp"

#include <cmath>

namespace dln {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::acos(-1.0) * u2;
  spare_ = r * std::sin(th);
  return r * std::cos(th);
}

int Rng::below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

Instance generate_instance(int rows, int cols, int sparsity, double eta, std::uint64_t seed) {
  if (rows < 1 || cols < 1 || sparsity < 0 || sparsity > cols) {
    throw InvalidDims("need rows >= 1, cols >= 1 and 0 <= sparsity <= cols");
  }
  if (!(eta >= 0.0)) throw InvalidParameters("noise level must be nonnegative");
  Rng rng(seed);
  Instance inst;
  inst.seed = seed;
  inst.eta = eta;
  inst.sparsity = sparsity;
  inst.a.resize(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) inst.a(i, j) = rng.normal();
  }
  // Partial Fisher-Yates for the support.
  std::vector<int> idx(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) idx[static_cast<std::size_t>(j)] = j;
  Vector x = Vector::Zero(cols);
  for (int k = 0; k < sparsity; ++k) {
    const int pick = k + rng.below(cols - k);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick)]);
    const double mag = 1.0 + rng.uniform();
    x(idx[static_cast<std::size_t>(k)]) = (rng.next() & 1) ? mag : -mag;
  }
  const Vector y0 = inst.a * x;
  inst.y = y0;
  if (eta > 0.0) {
    Vector noise(rows);
    for (int i = 0; i < rows; ++i) noise(i) = rng.normal();
    inst.y += eta * y0.norm() * noise.normalized();
  }
  inst.x_true = x;
  return inst;
}

}  // namespace dln
