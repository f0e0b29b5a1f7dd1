#pragma once
//
// Seeded random instances. The generator is std::mt19937_64; uniform and
// normal variates are derived here rather than through <random>
// distributions, whose output is implementation-defined, so a seed yields the
// same instance with any standard library.
//

#include <cstdint>
#include <optional>
#include <random>

#include "altproj/linalg.hpp"

namespace altproj {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [lo, hi] (rejection sampling, unbiased).
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller.
  double normal();

  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Span of d independent Gaussian vectors in R^n (dimension d with probability 1).
Subspace random_subspace(Rng& rng, Index n, Index d);

// Haar-distributed orthogonal n x n matrix (QR of a Gaussian matrix with the
// sign of R's diagonal fixed).
Matrix random_orthogonal(Rng& rng, Index n);

}  // namespace altproj
