#include <array>
#include <cmath>
#include <string>

#include "altproj/divergence.hpp"
#include "altproj/errors.hpp"

namespace altproj {

namespace {

// Smallest s >= 1 with (1 + b^2)^{-s} < target.
std::uint64_t minimal_decay_exponent(double b, double target, std::uint64_t cap, int j) {
  const double rate = std::log1p(b * b);
  if (!(rate > 0.0)) {
    throw CapExceeded("replace_projection: beta_" + std::to_string(j) +
                      " underflows; use a larger eps or eta");
  }
  const double estimate = std::floor(std::log(1.0 / target) / rate) + 1.0;
  if (!(estimate <= static_cast<double>(cap))) {
    throw CapExceeded("replace_projection: exponent s for tier " + std::to_string(j) + " would be " +
                      std::to_string(estimate) + ", above the cap of " + std::to_string(cap) +
                      "; use a larger eps or eta");
  }
  auto s = static_cast<std::uint64_t>(std::max(1.0, estimate));
  const auto decays = [&](std::uint64_t e) { return std::exp(-static_cast<double>(e) * rate) < target; };
  while (!decays(s)) ++s;
  while (s > 1 && decays(s - 1)) --s;
  return s;
}

}  // namespace

void replace_projection_ladder(int k, double eps, double eta, std::uint64_t a,
                               const ReplaceProjectionOptions& opts,
                               std::vector<std::uint64_t>& s, std::vector<double>& betas) {
  if (k < 1) throw DomainError("replace_projection: the chain must be non-empty");
  if (!(eps > 0.0) || !(eta > 0.0)) throw DomainError("replace_projection: eps and eta must be positive");
  if (a < 1) throw DomainError("replace_projection: a must be >= 1");
  if (!(opts.margin >= 0.0 && opts.margin < 1.0)) {
    throw DomainError("replace_projection: margin must lie in [0, 1)");
  }
  const double target = eps * (1.0 - opts.margin);

  // 1-based: s[1..k], betas[1..k+1]
  std::vector<std::uint64_t> sv(static_cast<std::size_t>(k) + 1, 0);
  std::vector<double> bv(static_cast<std::size_t>(k) + 2, 0.0);
  bv[k + 1] = std::min(eta, 1.0) / 4.0;
  sv[k] = std::max(a + 1, minimal_decay_exponent(bv[k + 1], target, opts.s_cap, k));
  for (int j = k; j >= 1; --j) {
    double b = bv[j + 1] / 2.0;
    const double sj = static_cast<double>(sv[j]);
    while (!(-std::expm1(-sj * std::log1p(b * b)) < target)) {
      b /= 2.0;
      if (b == 0.0) throw CapExceeded("replace_projection: beta ladder underflowed");
    }
    bv[j] = b;
    if (j > 1) {
      sv[j - 1] = std::max(sv[j] + 1, minimal_decay_exponent(bv[j], target, opts.s_cap, j - 1));
      if (sv[j - 1] > opts.s_cap) {
        throw CapExceeded("replace_projection: exponent s(" + std::to_string(j - 1) +
                          ") above the cap; use a larger eps or eta");
      }
    }
  }
  s.assign(sv.begin() + 1, sv.end());
  betas.assign(bv.begin() + 1, bv.end());
}

ReplaceProjectionResult replace_projection(const std::vector<Subspace>& chain, const Subspace& X,
                                           const Subspace& E, double eps, double eta,
                                           std::uint64_t a, const ReplaceProjectionOptions& opts) {
  const int k = static_cast<int>(chain.size());
  if (k < 1) throw DomainError("replace_projection: the chain must be non-empty");
  const Index n = X.ambient_dim();
  if (E.ambient_dim() != n) throw DimensionError("replace_projection: X and E live in different spaces");
  for (int j = 0; j < k; ++j) {
    if (chain[j].ambient_dim() != n) {
      throw DimensionError("replace_projection: chain member " + std::to_string(j + 1) +
                           " lives in a different space");
    }
    if (!contains(X, chain[j])) {
      throw DomainError("replace_projection: chain member " + std::to_string(j + 1) +
                        " is not contained in X");
    }
    if (j > 0 && !contains(chain[j], chain[j - 1])) {
      throw DomainError("replace_projection: the chain is not nested at " + std::to_string(j + 1));
    }
  }
  if (!contains(E, X)) throw DomainError("replace_projection: X is not contained in E");

  const std::array<Subspace, 2> pair{complement(X), E};
  const Subspace room = intersect(pair);
  if (room.dim() < X.dim()) {
    throw DimensionError("replace_projection: dim(X⊥ ∩ E) = " + std::to_string(room.dim()) +
                         " is smaller than dim X = " + std::to_string(X.dim()));
  }

  ReplaceProjectionResult out;
  replace_projection_ladder(k, eps, eta, a, opts, out.s, out.betas);

  // Orthonormal basis of X adapted to the chain; tier t covers X_t minus X_{t-1}
  // and tier k+1 the rest of X.
  Matrix basis(n, X.dim());
  std::vector<double> gamma;
  Index filled = 0;
  const auto extend = [&](const Matrix& cols, double g) {
    for (Index c = 0; c < cols.cols() && filled < X.dim(); ++c) {
      Vector r = cols.col(c);
      for (int pass = 0; pass < 2 && filled > 0; ++pass) {
        r -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * r);
      }
      const double norm = r.norm();
      if (norm <= kRankTol) continue;
      basis.col(filled++) = r / norm;
      gamma.push_back(g);
    }
  };
  for (int t = 0; t < k; ++t) extend(chain[t].basis(), out.betas[t]);
  extend(X.basis(), out.betas[k]);
  if (filled != X.dim()) {
    throw ConstructionError("replace_projection: could not complete a chain-adapted basis of X");
  }

  Matrix ycols(n, X.dim());
  for (Index i = 0; i < X.dim(); ++i) {
    const double g = gamma[static_cast<std::size_t>(i)];
    ycols.col(i) = (basis.col(i) + g * room.basis().col(i)) / std::sqrt(1.0 + g * g);
  }
  out.Y = orthonormalize(ycols);

  const Matrix px = X.projector();
  const Matrix py = out.Y.projector();
  out.eta_achieved = operator_norm(px - py);

  // In X's coordinates P_X P_Y P_X = I - B^T B with B = P_{Y⊥} Q_X. B has entries
  // of size beta and is formed to full relative accuracy, so its spectrum gives
  // (P_X P_Y P_X)^s without the s * ulp drift of repeated squaring, which at
  // s ~ 1e12 would swamp eps.
  const Matrix& qx = X.basis();
  const Matrix& qy = out.Y.basis();
  const Matrix b = qx - qy * (qy.transpose() * qx);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b.transpose() * b);
  const Vector d = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  const Matrix& vecs = es.eigenvectors();
  for (int j = 0; j < k; ++j) {
    const double sj = static_cast<double>(out.s[j]);
    Vector f(d.size());
    for (Index i = 0; i < d.size(); ++i) f(i) = std::exp(sj * std::log1p(-d(i)));
    const Matrix power = vecs * f.asDiagonal() * vecs.transpose();
    const Matrix cj = qx.transpose() * chain[j].basis();
    out.tier_errors.push_back(operator_norm(power - cj * cj.transpose()));
  }
  const std::array<Subspace, 2> xy{X, out.Y};
  out.intersection_dim = intersect(xy).dim();

  if (!(out.eta_achieved < eta)) {
    throw ConstructionError("replace_projection: ||P_X - P_Y|| = " + std::to_string(out.eta_achieved) +
                            " is not below eta = " + std::to_string(eta));
  }
  if (out.intersection_dim != 0) {
    throw ConstructionError("replace_projection: X and Y intersect numerically (beta too small "
                            "to resolve in double precision)");
  }
  for (int j = 0; j < k; ++j) {
    if (!(out.tier_errors[j] < eps)) {
      throw ConstructionError("replace_projection: tier " + std::to_string(j + 1) + " error " +
                              std::to_string(out.tier_errors[j]) + " is not below eps = " +
                              std::to_string(eps));
    }
  }
  return out;
}

TripleResult build_triple(const Subspace& E, const Subspace& X, const Vector& u, const Vector& v,
                          double eps, double eta, const TripleOptions& opts) {
  return build_triple(E, X, u, v, eps, eta, quarter_circle(X, u, v, eps, opts.alpha0, opts.quarter),
                      opts);
}

TripleResult build_triple(const Subspace& E, const Subspace& X, const Vector& u, const Vector& v,
                          double eps, double eta, QuarterCircleResult quarter,
                          const TripleOptions& opts) {
  const std::uint64_t phi_len = quarter.phi.length();
  ReplaceProjectionResult rp = replace_projection(quarter.chain, X, E,
                                                  eps / static_cast<double>(phi_len), eta, 1,
                                                  opts.replace);

  TripleResult out;
  // b_j -> (a2 a3 a2)^{s(j)}; c = a1 is kept.
  const auto xyx = std::make_shared<const Word>(Word::letter(2) * Word::letter(3) * Word::letter(2));
  std::map<int, WordPtr> subs;
  for (int j = 1; j <= quarter.k; ++j) {
    subs[j + 1] = std::make_shared<const Word>(Word::power(xyx, rp.s[j - 1]));
  }
  out.psi = quarter.phi.substitute(subs);
  out.W = quarter.W;
  out.X = X;
  out.Y = rp.Y;
  out.eta_achieved = rp.eta_achieved;
  out.s = rp.s;
  out.betas = rp.betas;
  out.N = out.psi.letter_count(1);

  const std::vector<Matrix> ops{out.W.projector(), X.projector(), rp.Y.projector()};
  out.achieved_error = (apply_word(out.psi, ops, u) - v).norm();
  out.quarter = std::move(quarter);
  out.replace = std::move(rp);

  if (out.N != out.quarter.phi.letter_count(1)) {
    throw ConstructionError("build_triple: substitution changed the W-letter count");
  }
  if (!(out.achieved_error < 3.0 * eps)) {
    throw ConstructionError("build_triple: achieved error " + std::to_string(out.achieved_error) +
                            " is not below 3 eps = " + std::to_string(3.0 * eps));
  }
  return out;
}

}  // namespace altproj
