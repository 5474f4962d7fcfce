#include "pcia/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace pcia {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: empty range");
  return engine_() % n;
}

Complex Rng::gaussian() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log1p(-u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

CMatrix Rng::gaussian_matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = gaussian();
  return m;
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k < 0 || k > n)
    throw std::invalid_argument("sample_without_replacement: bad sample size");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(uniform_int(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

CMatrix random_orthonormal(Index rows, Index cols, Rng& rng) {
  if (cols > rows)
    throw std::invalid_argument("random_orthonormal: more columns than rows");
  if (cols == 0) return CMatrix(rows, 0);
  Eigen::HouseholderQR<CMatrix> qr(rng.gaussian_matrix(rows, cols));
  return qr.householderQ() * CMatrix::Identity(rows, cols);
}

}  // namespace pcia
