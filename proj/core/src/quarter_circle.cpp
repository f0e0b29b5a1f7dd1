#include <cmath>
#include <numbers>
#include <string>

#include "altproj/divergence.hpp"
#include "altproj/errors.hpp"

namespace altproj {

int k_of_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("k_of_eps: eps must lie in (0, 1]");
  // The strict inequality is decided with a small margin: evaluated naively,
  // cos(pi/4)^2 rounds to just above 0.5 and k(0.5) would come out as 2.
  constexpr double kMargin = 1e-12;
  for (int k = 1;; ++k) {
    if (std::pow(std::cos(std::numbers::pi / (2.0 * k)), k) > 1.0 - eps + kMargin) return k;
  }
}

namespace {

double distance_to_line(const Matrix& power, const Matrix& line) {
  return operator_norm(power - line);
}

// Smallest r >= 1 with ||a^r - line|| < tol. The sequence is non-increasing in
// r (a is self-adjoint with spectrum in [0,1] and eigenvalue 1 exactly on the
// line), so doubling followed by bisection finds the same r as a linear scan.
std::uint64_t minimal_power(const Matrix& a, const Matrix& line, double tol, std::uint64_t cap,
                            int j) {
  std::uint64_t hi = 1;
  Matrix p = a;
  std::uint64_t lo = 0;
  while (!(distance_to_line(p, line) < tol)) {
    if (hi >= cap) {
      throw CapExceeded("quarter_circle: r(" + std::to_string(j) + ") exceeds the cap of " +
                        std::to_string(cap) + "; use a larger eps");
    }
    lo = hi;
    if (2 * hi <= cap) {
      p = p * p;
      hi *= 2;
    } else {
      hi = cap;
      p = matrix_power(a, hi);
    }
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (distance_to_line(matrix_power(a, mid), line) < tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Subspace span_of(const std::vector<Vector>& cols, Index d) {
  return orthonormalize(std::span<const Vector>(cols), d);
}

}  // namespace

QuarterCircleResult quarter_circle(const Subspace& X, const Vector& u, const Vector& v, double eps,
                                   double alpha0, const QuarterCircleOptions& opts) {
  const int k = k_of_eps(eps);
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw DomainError("quarter_circle: alpha0 must lie in (0,1)");
  if (u.size() != X.ambient_dim() || v.size() != X.ambient_dim()) {
    throw DimensionError("quarter_circle: u and v must live in the ambient space of X");
  }
  if (X.dim() < k + 2) {
    throw DimensionError("quarter_circle: dim X = " + std::to_string(X.dim()) + " but eps = " +
                         std::to_string(eps) + " needs k + 2 = " + std::to_string(k + 2));
  }
  const Matrix& Q = X.basis();
  const Index d = X.dim();
  const Vector uc = Q.transpose() * u;
  const Vector vc = Q.transpose() * v;
  if ((Q * uc - u).norm() > 1e-10 || (Q * vc - v).norm() > 1e-10) {
    throw DomainError("quarter_circle: u and v must lie in X");
  }
  if (std::abs(u.norm() - 1.0) > 1e-10 || std::abs(v.norm() - 1.0) > 1e-10 ||
      std::abs(u.dot(v)) > 1e-10) {
    throw DomainError("quarter_circle: u and v must be orthonormal");
  }

  // Everything below is carried out in the coordinates of X's basis; every
  // operator involved maps X into X and vanishes on X⊥, so operator norms agree.
  Matrix uv(d, 2);
  uv << uc, vc;
  const Subspace wc = orthonormalize(uv);
  const Matrix pw = wc.projector();
  const Matrix zs = complement(wc).basis();

  QuarterCircleResult out;
  out.k = k;
  std::vector<Vector> hc(k + 1), zc(k);
  for (int j = 0; j <= k; ++j) {
    const double t = std::numbers::pi * j / (2.0 * k);
    hc[j] = uc * std::cos(t) + vc * std::sin(t);
  }
  for (int i = 0; i < k; ++i) zc[i] = zs.col(i);

  const double tol = eps / k;
  out.alphas.push_back(alpha0);
  std::vector<Vector> base;  // h_i + alpha_i z_i for i < j
  std::vector<Subspace> chain_c;
  for (int j = 1; j <= k; ++j) {
    base.push_back(hc[j - 1] + out.alphas[j - 1] * zc[j - 1]);
    const Matrix line = hc[j] * hc[j].transpose();

    std::vector<Vector> cols = base;
    cols.push_back(hc[j]);
    const Subspace xp_space = span_of(cols, d);
    const Matrix xp = xp_space.projector();
    const std::uint64_t r = minimal_power(xp * pw * xp, line, tol, opts.r_cap, j);
    out.r.push_back(r);

    if (j == k) {
      out.alphas.push_back(0.0);
      out.bounds.push_back(distance_to_line(matrix_power(xp * pw * xp, r), line));
      chain_c.push_back(xp_space);
      break;
    }

    double a = out.alphas[j - 1] / 2.0;
    bool found = false;
    for (int t = 0; t <= opts.max_halvings; ++t, a /= 2.0) {
      cols.back() = hc[j] + a * zc[j];
      const Subspace xj_space = span_of(cols, d);
      const Matrix xj = xj_space.projector();
      const double bound = distance_to_line(matrix_power(xj * pw * xj, r), line);
      if (bound < tol) {
        out.alphas.push_back(a);
        out.bounds.push_back(bound);
        chain_c.push_back(xj_space);
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConstructionError("quarter_circle: no alpha_" + std::to_string(j) + " within " +
                              std::to_string(opts.max_halvings) + " halvings");
    }
  }

  // phi = (b_k c b_k)^{r(k)} ... (b_1 c b_1)^{r(1)}, c = letter 1, b_j = letter j+1
  for (int j = k; j >= 1; --j) {
    auto sandwich = std::make_shared<const Word>(Word::letter(j + 1) * Word::letter(1) *
                                                 Word::letter(j + 1));
    out.phi *= Word::power(sandwich, out.r[j - 1]);
  }

  std::vector<Matrix> ops{pw};
  for (const Subspace& c : chain_c) ops.push_back(c.projector());
  out.achieved_error = (apply_word(out.phi, ops, uc) - vc).norm();

  Vector x = uc;
  for (int j = 1; j <= k; ++j) x = hc[j] * hc[j].dot(x);
  out.consecutive_error = (x - vc).norm();

  for (const Vector& h : hc) out.h.push_back(Q * h);
  for (const Vector& z : zc) out.z.push_back(Q * z);
  for (const Subspace& c : chain_c) out.chain.push_back(orthonormalize(Matrix(Q * c.basis())));
  out.W = orthonormalize(Matrix(Q * wc.basis()));

  if (!(out.achieved_error < 2.0 * eps)) {
    throw ConstructionError("quarter_circle: achieved error " + std::to_string(out.achieved_error) +
                            " is not below 2 eps = " + std::to_string(2.0 * eps));
  }
  return out;
}

}  // namespace altproj
