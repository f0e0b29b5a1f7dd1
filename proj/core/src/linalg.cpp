#include "altproj/linalg.hpp"

#include <algorithm>
#include <string>

#include "altproj/errors.hpp"

namespace altproj {

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

Subspace Subspace::zero(Index ambient_dim) {
  if (ambient_dim < 0) throw DomainError("Subspace::zero: negative dimension");
  return Subspace(Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Index ambient_dim) {
  if (ambient_dim < 0) throw DomainError("Subspace::full: negative dimension");
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  require_finite(basis, "Subspace::from_orthonormal");
  if (basis.cols() > basis.rows()) {
    throw DomainError("Subspace::from_orthonormal: more basis vectors than dimensions");
  }
  const Matrix gram = basis.transpose() * basis;
  const double dev = basis.cols() == 0
                         ? 0.0
                         : (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= kOrthonormalTol)) {
    throw DomainError("Subspace::from_orthonormal: basis not orthonormal (deviation " +
                      std::to_string(dev) + ")");
  }
  return Subspace(std::move(basis));
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

namespace {

// Removes the span of the first `count` columns of q from r (classical
// Gram-Schmidt, applied twice).
void deflate(const Matrix& q, Index count, Eigen::Ref<Vector> r) {
  if (count == 0) return;
  const auto accepted = q.leftCols(count);
  for (int pass = 0; pass < 2; ++pass) {
    const Vector coeff = accepted.transpose() * r;
    r -= accepted * coeff;
  }
}

}  // namespace

Subspace orthonormalize(const Eigen::Ref<const Matrix>& columns, double tol) {
  if (!(tol > 0.0)) throw DomainError("orthonormalize: tol must be positive");
  require_finite(columns, "orthonormalize");

  const Index n = columns.rows();
  double scale = 0.0;
  for (Index c = 0; c < columns.cols(); ++c) scale = std::max(scale, columns.col(c).norm());
  if (scale == 0.0) scale = 1.0;
  const double threshold = tol * scale;

  Matrix q(n, std::min<Index>(n, columns.cols()));
  Index rank = 0;
  Vector r(n);
  for (Index c = 0; c < columns.cols() && rank < n; ++c) {
    r = columns.col(c);
    deflate(q, rank, r);
    const double norm = r.norm();
    if (norm <= threshold) continue;
    r /= norm;
    // One more pass on the normalized vector keeps Q^T Q = I at roundoff level
    // even when the residual was tiny relative to the input.
    deflate(q, rank, r);
    r.normalize();
    q.col(rank++) = r;
  }
  return Subspace::from_orthonormal(q.leftCols(rank));
}

Subspace orthonormalize(std::span<const Vector> vectors, Index ambient_dim, double tol) {
  Matrix cols(ambient_dim, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim) {
      throw DimensionError("orthonormalize: vector " + std::to_string(i) + " has dimension " +
                           std::to_string(vectors[i].size()) + ", expected " +
                           std::to_string(ambient_dim));
    }
    cols.col(static_cast<Index>(i)) = vectors[i];
  }
  return orthonormalize(cols, tol);
}

Vector project(const Subspace& s, const Eigen::Ref<const Vector>& x) {
  if (x.size() != s.ambient_dim()) {
    throw DimensionError("project: vector has dimension " + std::to_string(x.size()) +
                         ", subspace lives in R^" + std::to_string(s.ambient_dim()));
  }
  require_finite(x, "project");
  const Vector coeff = s.basis().transpose() * x;
  return s.basis() * coeff;
}

Subspace complement(const Subspace& s) {
  const Index n = s.ambient_dim();
  const Index d = s.dim();
  if (d == 0) return Subspace::full(n);
  if (d == n) return Subspace::zero(n);
  Eigen::HouseholderQR<Matrix> qr(s.basis());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix rest = q.rightCols(n - d);
  // Householder Q is orthogonal to roundoff; clean the residual overlap with
  // the given basis so the 1e-12 orthogonality contract holds for ill-scaled input.
  rest -= s.basis() * (s.basis().transpose() * rest);
  for (Index c = 0; c < rest.cols(); ++c) {
    deflate(rest, c, rest.col(c));
    rest.col(c).normalize();
  }
  return Subspace::from_orthonormal(std::move(rest));
}

Subspace intersect(std::span<const Subspace> subspaces, double tol) {
  if (subspaces.empty()) throw DomainError("intersect: empty list");
  const Index n = subspaces.front().ambient_dim();
  Index total = 0;
  for (const auto& s : subspaces) {
    if (s.ambient_dim() != n) {
      throw DimensionError("intersect: subspaces live in different ambient spaces");
    }
    total += n - s.dim();
  }
  if (subspaces.size() == 1) return subspaces.front();

  Matrix perp(n, total);
  Index at = 0;
  for (const auto& s : subspaces) {
    const Subspace c = complement(s);
    perp.middleCols(at, c.dim()) = c.basis();
    at += c.dim();
  }
  return complement(orthonormalize(perp, tol));
}

Subspace sum(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError("sum: subspaces live in different ambient spaces");
  }
  Matrix cols(a.ambient_dim(), a.dim() + b.dim());
  cols << a.basis(), b.basis();
  return orthonormalize(cols, tol);
}

double operator_norm(const Eigen::Ref<const Matrix>& a) {
  if (a.size() == 0) return 0.0;
  require_finite(a, "operator_norm");
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool contains(const Subspace& outer, const Subspace& inner, double tol) {
  if (outer.ambient_dim() != inner.ambient_dim()) {
    throw DimensionError("contains: subspaces live in different ambient spaces");
  }
  if (inner.dim() == 0) return true;
  const Matrix residual =
      inner.basis() - outer.basis() * (outer.basis().transpose() * inner.basis());
  return residual.colwise().norm().maxCoeff() <= tol;
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && contains(a, b, tol) && contains(b, a, tol);
}

Matrix matrix_power(const Eigen::Ref<const Matrix>& a, std::uint64_t e) {
  if (a.rows() != a.cols()) throw DimensionError("matrix_power: matrix is not square");
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (e != 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return result;
}

}  // namespace altproj
