#include "altproj/kaczmarz.hpp"

#include <cmath>
#include <string>

#include "altproj/errors.hpp"

namespace altproj {

Vector hyperplane_project(const Hyperplane& h, const Vector& z) {
  if (h.normal.size() != z.size()) throw DimensionError("hyperplane_project: dimension mismatch");
  require_finite(h.normal, "hyperplane_project");
  require_finite(z, "hyperplane_project");
  if (!std::isfinite(h.offset)) throw DomainError("hyperplane_project: non-finite offset");
  const double nn = h.normal.squaredNorm();
  if (nn == 0.0) throw DomainError("hyperplane_project: zero normal");
  return z - h.normal * ((z.dot(h.normal) - h.offset) / nn);
}

LinearSystem::LinearSystem(Index ambient_dim, std::vector<Hyperplane> rows) : n_(ambient_dim) {
  rows_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Hyperplane& h = rows[i];
    if (h.normal.size() != n_) {
      throw DimensionError("row " + std::to_string(i + 1) + " has " +
                           std::to_string(h.normal.size()) + " coefficients, expected " +
                           std::to_string(n_));
    }
    require_finite(h.normal, "LinearSystem");
    if (!std::isfinite(h.offset)) throw DomainError("LinearSystem: non-finite right-hand side");
    Row r;
    r.offset = h.offset;
    r.norm_sq = h.normal.squaredNorm();
    if (r.norm_sq == 0.0) throw DomainError("row " + std::to_string(i + 1) + " has a zero normal");
    Index nnz = 0;
    for (Index k = 0; k < n_; ++k) nnz += h.normal(k) != 0.0;
    r.sparse = 4 * nnz < n_;
    if (r.sparse) {
      for (Index k = 0; k < n_; ++k) {
        if (h.normal(k) != 0.0) r.entries.emplace_back(k, h.normal(k));
      }
    } else {
      r.dense = std::move(h.normal);
    }
    rows_.push_back(std::move(r));
  }
}

LinearSystem LinearSystem::from_matrix(const Matrix& a, const Vector& c) {
  if (a.rows() != c.size()) throw DimensionError("from_matrix: rows of A and length of c differ");
  std::vector<Hyperplane> rows;
  for (Index i = 0; i < a.rows(); ++i) rows.push_back({a.row(i).transpose(), c(i)});
  return LinearSystem(a.cols(), std::move(rows));
}

Hyperplane LinearSystem::row(std::size_t i) const {
  const Row& r = rows_.at(i);
  if (!r.sparse) return {r.dense, r.offset};
  Vector v = Vector::Zero(n_);
  for (const auto& [k, val] : r.entries) v(k) = val;
  return {v, r.offset};
}

Matrix LinearSystem::matrix() const {
  Matrix a(static_cast<Index>(rows_.size()), n_);
  for (std::size_t i = 0; i < rows_.size(); ++i) a.row(static_cast<Index>(i)) = row(i).normal;
  return a;
}

Vector LinearSystem::rhs() const {
  Vector c(static_cast<Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) c(static_cast<Index>(i)) = rows_[i].offset;
  return c;
}

double LinearSystem::dot(const Row& r, const Vector& x) const {
  if (!r.sparse) return r.dense.dot(x);
  double s = 0.0;
  for (const auto& [k, val] : r.entries) s += val * x(k);
  return s;
}

double LinearSystem::max_violation(const Vector& x) const {
  if (x.size() != n_) throw DimensionError("max_violation: dimension mismatch");
  double worst = 0.0;
  for (const Row& r : rows_) {
    worst = std::max(worst, std::abs(dot(r, x) - r.offset) / std::sqrt(r.norm_sq));
  }
  return worst;
}

void LinearSystem::project_row(std::size_t i, Vector& x) const {
  const Row& r = rows_[i];
  const double scale = (dot(r, x) - r.offset) / r.norm_sq;
  if (!r.sparse) {
    x.noalias() -= scale * r.dense;
    return;
  }
  for (const auto& [k, val] : r.entries) x(k) -= scale * val;
}

KaczmarzResult solve(const LinearSystem& sys, const Vector& x0, std::uint64_t max_sweeps,
                     double tol) {
  if (x0.size() != sys.ambient_dim()) {
    throw DimensionError("solve: x0 has dimension " + std::to_string(x0.size()) +
                         ", system has " + std::to_string(sys.ambient_dim()) + " unknowns");
  }
  require_finite(x0, "solve");
  if (max_sweeps < 1) throw DomainError("solve: max_sweeps must be >= 1");
  if (!(tol >= 0.0)) throw DomainError("solve: tol must be non-negative");

  KaczmarzResult out;
  out.solution = x0;
  if (sys.rows() == 0) {
    out.residual_history.push_back(0.0);
    out.converged = true;
    return out;
  }

  double best = sys.max_violation(x0);
  int stalled = 0;
  for (std::uint64_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < sys.rows(); ++i) sys.project_row(i, out.solution);
    const double v = sys.max_violation(out.solution);
    out.residual_history.push_back(v);
    out.sweeps = sweep;
    if (v <= tol) {
      out.converged = true;
      break;
    }
    if (v < best) {
      best = v;
      stalled = 0;
    } else if (++stalled >= kInconsistentSweeps) {
      out.suspected_inconsistent = true;
      break;
    }
  }
  return out;
}

RandomSystem random_consistent_system(Rng& rng, Index rows, Index cols, double density) {
  if (rows < 1 || cols < 1) throw DomainError("random_consistent_system: empty shape");
  if (!(density > 0.0 && density <= 1.0)) {
    throw DomainError("random_consistent_system: density must be in (0, 1]");
  }
  Matrix a = Matrix::Zero(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) {
      if (rng.uniform() < density) a(i, k) = rng.normal();
    }
    if (a.row(i).isZero(0.0)) a(i, rng.integer(0, cols - 1)) = rng.normal();
  }
  Vector planted = rng.normal_vector(cols);
  Vector c = a * planted;
  return {LinearSystem::from_matrix(a, c), std::move(planted)};
}

Matrix thirds_p1() {
  Matrix p(3, 3);
  p << 1, 0, 0,
       0, 0.5, 0.5,
       0, 0.5, 0.5;
  return p;
}

Matrix thirds_p2() {
  Matrix p(3, 3);
  p << 0.5, 0.5, 0,
       0.5, 0.5, 0,
       0, 0, 1;
  return p;
}

ThirdsResult thirds_demo(double x, double y, double z, int n_iters) {
  if (!(x > 0.0 && y > 0.0 && z > 0.0) || !std::isfinite(x + y + z)) {
    throw DomainError("thirds_demo: section lengths must be positive and finite");
  }
  if (n_iters < 0) throw DomainError("thirds_demo: n_iters must be >= 0");

  const Matrix t = thirds_p2() * thirds_p1();
  const double c = x + y + z;
  // Relative slack for the bound comparison; the bound is tight at k = 0.
  const double slack = 1e-12 * c;

  ThirdsResult out;
  Vector v(3);
  v << x, y, z;
  for (int k = 0; k <= n_iters; ++k) {
    if (k > 0) v = t * v;
    ThirdsStep st;
    st.k = k;
    st.lengths = v;
    st.left = v(0);
    st.right = v(0) + v(1);
    st.left_dev = std::abs(st.left - c / 3.0);
    st.right_dev = std::abs(st.right - 2.0 * c / 3.0);
    st.left_bound = (2.0 * c / 3.0) * std::pow(4.0, -k);
    st.right_bound = (c / 3.0) * std::pow(4.0, 1 - k);
    if (st.left_dev > st.left_bound + slack || st.right_dev > st.right_bound + slack) {
      out.bound_ok = false;
    }
    out.positions.push_back(std::move(st));
  }
  return out;
}

}  // namespace altproj
