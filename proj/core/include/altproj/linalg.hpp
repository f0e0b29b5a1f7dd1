#pragma once
//
// Dense real linear algebra for subspaces of R^n: orthonormal bases,
// orthogonal projections, complements, intersections, sums and operator norms.
//
// Every subspace is carried by an orthonormal basis. Equality of subspaces is
// mutual containment within a tolerance, never equality of bases.
//

#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace altproj {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Relative rank tolerance used whenever a caller does not supply one.
inline constexpr double kRankTol = 1e-10;

// Orthonormality tolerance for Subspace bases (entrywise on Q^T Q - I).
inline constexpr double kOrthonormalTol = 1e-12;

// Throws DomainError naming `what` if any entry is NaN or infinite.
// Vectors bind as n x 1 matrices.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

class Subspace {
 public:
  // The zero subspace of R^0. Mostly useful as a placeholder in containers.
  Subspace() = default;

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  // Adopts `basis` (n x d) as-is. Throws DomainError unless its columns are
  // orthonormal within kOrthonormalTol.
  static Subspace from_orthonormal(Matrix basis);

  Index ambient_dim() const noexcept { return basis_.rows(); }
  Index dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }

  bool is_zero() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == ambient_dim(); }

  // Q Q^T.
  Matrix projector() const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}

  Matrix basis_;
};

// Orthonormal basis of the span of the columns. A candidate direction is
// discarded when its residual after deflation against the accepted basis is
// <= tol * (largest column norm, or 1 if every column is zero).
Subspace orthonormalize(const Eigen::Ref<const Matrix>& columns, double tol = kRankTol);

// Same, for a list of vectors of dimension `ambient_dim`. An empty list gives
// the zero subspace of R^ambient_dim.
Subspace orthonormalize(std::span<const Vector> vectors, Index ambient_dim,
                        double tol = kRankTol);

// Q (Q^T x).
Vector project(const Subspace& s, const Eigen::Ref<const Vector>& x);

Subspace complement(const Subspace& s);

// The orthogonal complement of the sum of the complements.
Subspace intersect(std::span<const Subspace> subspaces, double tol = kRankTol);

Subspace sum(const Subspace& a, const Subspace& b, double tol = kRankTol);

// Largest singular value. Zero for empty or all-zero matrices.
double operator_norm(const Eigen::Ref<const Matrix>& a);

// True when every basis vector of `inner` is reproduced by projecting onto
// `outer`, within `tol` in norm.
bool contains(const Subspace& outer, const Subspace& inner, double tol = 1e-10);

// Mutual containment.
bool same_subspace(const Subspace& a, const Subspace& b, double tol = 1e-10);

// a^e by repeated squaring; a^0 is the identity. `a` must be square.
Matrix matrix_power(const Eigen::Ref<const Matrix>& a, std::uint64_t e);

}  // namespace altproj
