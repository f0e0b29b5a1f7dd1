#pragma once
//
// The iteration x_n = P_{j_n} x_{n-1} and its diagnostics.
//

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "altproj/linalg.hpp"
#include "altproj/schedule.hpp"

namespace altproj {

enum class IterateStorage {
  none,
  all,
  // Store when n * (max_steps + 1) <= kAutoStoreBudget doubles.
  automatic,
};

inline constexpr std::uint64_t kAutoStoreBudget = std::uint64_t{1} << 22;

struct RunConfig {
  std::uint64_t max_steps = 10000;
  // Stop once the increment (and the residual, when tracked) stays below
  // stop_tol for window_len consecutive steps.
  double stop_tol = 1e-12;
  int window_len = 5;
  // Track ||x_n - P_M x0||.
  bool track_residual = true;
  IterateStorage storage = IterateStorage::automatic;
};

struct Trace {
  std::vector<double> iterate_norms;  // ||x_0||, ||x_1||, ..., one more entry than steps
  std::vector<double> increments;     // ||x_n - x_{n-1}||, n = 1..steps
  std::vector<double> residuals;      // ||x_n - P_M x0||, n = 1..steps (empty if not tracked)
  std::vector<int> indices;           // j_n, n = 1..steps
  Vector final_iterate;
  std::optional<std::vector<Vector>> stored_iterates;  // x_0 .. x_steps
  std::optional<Vector> limit;                         // P_M x0 when tracked
  bool converged = false;
  bool schedule_exhausted = false;

  std::uint64_t steps() const noexcept { return indices.size(); }
};

Trace run(std::span<const Subspace> subspaces, const Schedule& s, const Vector& x0,
          const RunConfig& cfg = {});

// project(intersect(subspaces), x0).
Vector reference_limit(std::span<const Subspace> subspaces, const Vector& x0);

// ||T^n x0 - T^{n+1} x0|| for n = 0..n_max with T = P_J ... P_1 (P_1 acts first).
std::vector<double> kakutani_gaps(std::span<const Subspace> subspaces, const Vector& x0,
                                  std::uint64_t n_max);

// Smallest A with ||x_n - x_m||^2 <= A * sum_{k=m}^{n-1} ||x_{k+1} - x_k||^2 over
// all 1 <= m < n <= steps. Pairs whose denominator is numerically zero (below
// (1e-12 * ||x_1||)^2) are skipped. Throws DomainError without stored iterates.
double sakai_constant(const Trace& trace);

}  // namespace altproj
