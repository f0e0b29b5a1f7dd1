#pragma once
//
// Cyclic projection onto the hyperplanes of a linear system, and the
// three-section string demo.
//

#include <cstdint>
#include <utility>
#include <vector>

#include "altproj/linalg.hpp"
#include "altproj/random.hpp"

namespace altproj {

// {y : <y, normal> = offset}
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
};

// z - normal * (<z, normal> - offset) / ||normal||^2
Vector hyperplane_project(const Hyperplane& h, const Vector& z);

class LinearSystem {
 public:
  // Rows with fewer than 25% non-zeros are stored sparse.
  LinearSystem(Index ambient_dim, std::vector<Hyperplane> rows);

  static LinearSystem from_matrix(const Matrix& a, const Vector& c);

  Index ambient_dim() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  Hyperplane row(std::size_t i) const;
  bool row_is_sparse(std::size_t i) const { return rows_[i].sparse; }

  // Dense copy of the coefficient matrix and right-hand side.
  Matrix matrix() const;
  Vector rhs() const;

  // max_i |<x, y_i> - c_i| / ||y_i||
  double max_violation(const Vector& x) const;

  // Projects x onto row i's hyperplane in place.
  void project_row(std::size_t i, Vector& x) const;

 private:
  struct Row {
    bool sparse = false;
    Vector dense;
    std::vector<std::pair<Index, double>> entries;
    double offset = 0.0;
    double norm_sq = 0.0;
  };

  double dot(const Row& r, const Vector& x) const;

  Index n_ = 0;
  std::vector<Row> rows_;
};

struct KaczmarzResult {
  Vector solution;
  std::vector<double> residual_history;  // max violation after each sweep
  bool converged = false;
  // 50 consecutive sweeps without a decrease in the violation.
  bool suspected_inconsistent = false;
  std::uint64_t sweeps = 0;
};

inline constexpr int kInconsistentSweeps = 50;

// Full sweeps in row order 1..J until max_violation <= tol or max_sweeps.
KaczmarzResult solve(const LinearSystem& sys, const Vector& x0, std::uint64_t max_sweeps,
                     double tol);

struct RandomSystem {
  LinearSystem system;
  Vector planted;  // the x* used to build the right-hand side
};

// rows x cols system with each entry non-zero with probability `density`
// (every row keeps at least one non-zero), c = A x* for Gaussian x*.
RandomSystem random_consistent_system(Rng& rng, Index rows, Index cols, double density);

struct ThirdsStep {
  int k = 0;
  Vector lengths;  // (x, y, z) after k applications of P2 P1
  double left = 0.0;
  double right = 0.0;
  double left_dev = 0.0;
  double right_dev = 0.0;
  double left_bound = 0.0;   // (2c/3) 4^-k
  double right_bound = 0.0;  // (c/3) 4^(1-k)
};

struct ThirdsResult {
  std::vector<ThirdsStep> positions;  // k = 0..n_iters
  bool bound_ok = true;
};

// The two averaging matrices of the string demo.
Matrix thirds_p1();
Matrix thirds_p2();

ThirdsResult thirds_demo(double x, double y, double z, int n_iters);

}  // namespace altproj
