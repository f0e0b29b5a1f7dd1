#include "altproj/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

Subspace deflate(const Subspace& s, const Subspace& m) {
  if (m.is_zero() || s.is_zero()) return s;
  const Matrix residual = s.basis() - m.basis() * (m.basis().transpose() * s.basis());
  std::vector<Index> keep;
  for (Index c = 0; c < residual.cols(); ++c) {
    if (residual.col(c).norm() > kDeflationTol) keep.push_back(c);
  }
  Matrix cols(s.ambient_dim(), static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) cols.col(static_cast<Index>(i)) = residual.col(keep[i]);
  return orthonormalize(cols, kDeflationTol);
}

void check_pair(const Subspace& s1, const Subspace& s2, const char* what) {
  if (s1.ambient_dim() != s2.ambient_dim()) {
    throw DimensionError(std::string(what) + ": subspaces live in different ambient spaces");
  }
}

}  // namespace

double friedrichs_cosine(const Subspace& s1, const Subspace& s2) {
  check_pair(s1, s2, "friedrichs_cosine");
  const std::array<Subspace, 2> pair{s1, s2};
  const Subspace m = intersect(pair);
  const Subspace d1 = deflate(s1, m);
  const Subspace d2 = deflate(s2, m);
  if (d1.is_zero() || d2.is_zero()) return 0.0;
  const Matrix cross = d1.basis().transpose() * d2.basis();
  return std::clamp(operator_norm(cross), 0.0, 1.0);
}

bool RateCurve::all_within_tol() const {
  return std::none_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

RateCurve rate_curve(const Subspace& s1, const Subspace& s2, int N) {
  check_pair(s1, s2, "rate_curve");
  if (N < 1) throw DomainError("rate_curve: N must be >= 1");

  RateCurve rc;
  rc.c = friedrichs_cosine(s1, s2);
  const std::array<Subspace, 2> pair{s1, s2};
  const Matrix pm = intersect(pair).projector();
  const Matrix t = s2.projector() * s1.projector();

  Matrix power = t;
  for (int n = 1; n <= N; ++n) {
    if (n > 1) power = power * t;
    const double measured = operator_norm(power - pm);
    const double predicted = std::pow(rc.c, 2 * n - 1);
    const double err = std::abs(measured - predicted);
    rc.measured.push_back(measured);
    rc.predicted.push_back(predicted);
    rc.abs_err.push_back(err);
    rc.flagged.push_back(!(err < RateCurve::kRateTol));
  }
  return rc;
}

}  // namespace altproj
