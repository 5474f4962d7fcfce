#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pcia/linalg.hpp"

namespace pcia {

// Deterministic random source. Gaussians come from an explicit Box-Muller
// transform (std::normal_distribution is not bit-portable across standard
// libraries, and run manifests promise byte-identical reruns).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                            // [0, 1)
  double uniform(double lo, double hi);
  std::uint64_t uniform_int(std::uint64_t n);  // [0, n), n > 0
  Complex gaussian();                          // circularly symmetric, E|z|^2 = 1
  CMatrix gaussian_matrix(Index rows, Index cols);  // i.i.d. entries, row-major fill
  std::vector<int> sample_without_replacement(int n, int k);  // ascending

 private:
  std::mt19937_64 engine_;
};

// Decorrelated child seed for drop/trial substreams.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

/// QR orthonormalization of an i.i.d. Gaussian draw; rows >= cols.
CMatrix random_orthonormal(Index rows, Index cols, Rng& rng);

}  // namespace pcia
