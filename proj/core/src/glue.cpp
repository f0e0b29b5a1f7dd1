#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "altproj/divergence.hpp"
#include "altproj/errors.hpp"
#include "altproj/iteration.hpp"
#include "altproj/random.hpp"

namespace altproj {

std::vector<double> default_epsilons(int K) {
  std::vector<double> eps;
  for (int i = 1; i <= K; ++i) eps.push_back(std::ldexp(1.0, -(i + 4)));
  return eps;
}

std::vector<Matrix> GluedConstruction::projectors() const {
  return {M1.projector(), M2.projector(), M3.projector()};
}

namespace {

Subspace span_of_all(const std::vector<Matrix>& blocks, Index n) {
  Index total = 0;
  for (const Matrix& b : blocks) total += b.cols();
  Matrix cols(n, total);
  Index at = 0;
  for (const Matrix& b : blocks) {
    cols.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return orthonormalize(cols);
}

[[noreturn]] void rethrow_for_triple(int i, double eps, const Error& err) {
  const std::string msg = "glue: triple " + std::to_string(i) + " (eps = " + std::to_string(eps) +
                          "): " + err.what() + "; suggestion: increase eps_" + std::to_string(i);
  if (dynamic_cast<const CapExceeded*>(&err)) throw CapExceeded(msg);
  throw ConstructionError(msg);
}

}  // namespace

GluedConstruction glue(int K, const std::vector<double>& epsilons, std::uint64_t seed,
                       const GlueOptions& opts) {
  if (K < 2) throw DomainError("glue: K must be >= 2");
  if (static_cast<int>(epsilons.size()) != K) {
    throw DomainError("glue: expected " + std::to_string(K) + " epsilons, got " +
                      std::to_string(epsilons.size()));
  }
  for (double e : epsilons) {
    if (!(e > 0.0 && e <= 1.0)) throw DomainError("glue: every eps_i must lie in (0, 1]");
  }
  const double budget = 4.0 * std::accumulate(epsilons.begin(), epsilons.end(), 0.0);
  if (opts.enforce_budget && !(budget < 0.5)) {
    throw DomainError("glue: divergence budget violated: 4 * sum(eps) = " + std::to_string(budget) +
                      " must be below 1/2");
  }

  GluedConstruction out;
  out.K = K;
  out.epsilons = epsilons;

  std::vector<int> ks;
  Index n = K + 1;
  for (double e : epsilons) {
    ks.push_back(k_of_eps(e));
    n += 2 * ks.back() + 2;
  }
  out.ambient_dim = n;

  Rng rng(seed);
  const Matrix frame = random_orthogonal(rng, n);
  for (int i = 0; i <= K; ++i) out.e.push_back(frame.col(i));

  // Block i: E_i = span{e_i, e_{i+1}} ⊕ F_i with dim F_i = 2 k_i + 2, and
  // X_i = span{e_i, e_{i+1}} ⊕ (first k_i columns of F_i). Then dim X_i = k_i + 2
  // and X_i⊥ ∩ E_i has dimension k_i + 2 as well.
  std::vector<Subspace> E, X;
  Index col = K + 1;
  for (int i = 0; i < K; ++i) {
    const Index f = 2 * ks[i] + 2;
    Matrix eb(n, 2 + f), xb(n, 2 + ks[i]);
    eb << frame.col(i), frame.col(i + 1), frame.middleCols(col, f);
    xb << frame.col(i), frame.col(i + 1), frame.middleCols(col, ks[i]);
    E.push_back(orthonormalize(eb));
    X.push_back(orthonormalize(xb));
    col += f;
  }

  std::vector<QuarterCircleResult> quarters;
  std::vector<double> delta(K + 2, 1.0);  // delta_0 = delta_{K+1} = 1
  for (int i = 1; i <= K; ++i) {
    try {
      quarters.push_back(quarter_circle(X[i - 1], out.e[i - 1], out.e[i], epsilons[i - 1],
                                        opts.triple.alpha0, opts.triple.quarter));
    } catch (const Error& err) {
      rethrow_for_triple(i, epsilons[i - 1], err);
    }
    std::uint64_t N = 0;
    for (std::uint64_t r : quarters.back().r) N += r;
    delta[i] = epsilons[i - 1] / static_cast<double>(N);
  }

  std::vector<Matrix> m1_blocks, m2_blocks, m3_blocks;
  m2_blocks.push_back(out.e[0]);  // Y_0 = span{e_1}
  const auto map_even = std::map<int, int>{{1, 3}, {2, 1}, {3, 2}};
  const auto map_odd = std::map<int, int>{{1, 2}, {2, 1}, {3, 3}};
  for (int i = 1; i <= K; ++i) {
    const double eta = opts.eta_override ? *opts.eta_override : std::min(delta[i - 1], delta[i + 1]);
    TripleResult t;
    try {
      t = build_triple(E[i - 1], X[i - 1], out.e[i - 1], out.e[i], epsilons[i - 1], eta,
                       quarters[i - 1], opts.triple);
    } catch (const Error& err) {
      rethrow_for_triple(i, epsilons[i - 1], err);
    }
    m1_blocks.push_back(X[i - 1].basis());
    (i % 2 == 0 ? m2_blocks : m3_blocks).push_back(t.Y.basis());

    GluedTriple g;
    g.k = t.quarter.k;
    g.r = t.quarter.r;
    g.s = t.s;
    g.psi_length = t.psi.length();
    g.N = t.N;
    g.delta = delta[i];
    g.eta = eta;
    g.eta_achieved = t.eta_achieved;
    g.triple_error = t.achieved_error;
    out.triples.push_back(std::move(g));
    out.words.push_back(std::make_shared<const Word>(t.psi.relabel(i % 2 == 0 ? map_even : map_odd)));
  }
  // Y_{K+1} = span{e_{K+1}} joins the space of its parity, as Y_0 does.
  ((K + 1) % 2 == 0 ? m2_blocks : m3_blocks).push_back(out.e[K]);

  out.M1 = span_of_all(m1_blocks, n);
  out.M2 = span_of_all(m2_blocks, n);
  out.M3 = span_of_all(m3_blocks, n);

  Word all;
  std::uint64_t at = 0;
  for (int i = 1; i <= K; ++i) {
    at += out.words[i - 1]->length();
    out.checkpoints.push_back(at);
  }
  for (int i = K; i >= 1; --i) all *= Word::power(out.words[i - 1], 1);
  out.schedule_word = std::make_shared<const Word>(std::move(all));

  const std::vector<Matrix> ops = out.projectors();
  Vector x = out.e[0];
  bool ok = true;
  for (int i = 1; i <= K; ++i) {
    const Vector step = apply_word(*out.words[i - 1], ops, out.e[i - 1]);
    out.verified_bounds.push_back((step - out.e[i]).norm());
    ok = ok && out.verified_bounds.back() < 4.0 * epsilons[i - 1];
    x = apply_word(*out.words[i - 1], ops, x);
    out.checkpoint_iterates.push_back(x);
    out.checkpoint_errors.push_back((x - out.e[i]).norm());
  }
  out.non_cauchy_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < K; ++a) {
    for (int b = a + 1; b < K; ++b) {
      out.non_cauchy_gap = std::min(
          out.non_cauchy_gap, (out.checkpoint_iterates[a] - out.checkpoint_iterates[b]).norm());
    }
  }
  const std::array<Subspace, 3> ms{out.M1, out.M2, out.M3};
  out.intersection_dim = intersect(ms).dim();
  out.verified = ok && out.intersection_dim == 0;
  return out;
}

SakaiBlowup sakai_blowup(const GluedConstruction& c, std::uint64_t max_run_steps) {
  if (c.K < 2 || !c.schedule_word) throw DomainError("sakai_blowup: needs a construction with K >= 2");
  const std::uint64_t len = c.schedule_word->length();
  SakaiBlowup out;
  if (len <= max_run_steps) {
    const std::vector<Subspace> spaces{c.M1, c.M2, c.M3};
    RunConfig cfg;
    cfg.max_steps = len;
    cfg.stop_tol = std::numeric_limits<double>::min();
    cfg.window_len = std::numeric_limits<int>::max();
    cfg.track_residual = false;
    cfg.storage = IterateStorage::all;
    const Trace t = run(spaces, Schedule::constructed(c.schedule_word, 3), c.e[0], cfg);
    out.value = sakai_constant(t);
    out.exact = true;
    return out;
  }
  // For projections ||x_k||^2 = ||x_{k+1}||^2 + ||x_k - x_{k+1}||^2, so the sum
  // of squared increments between two checkpoints telescopes.
  for (std::size_t a = 0; a < c.checkpoint_iterates.size(); ++a) {
    for (std::size_t b = a + 1; b < c.checkpoint_iterates.size(); ++b) {
      const Vector& xm = c.checkpoint_iterates[a];
      const Vector& xn = c.checkpoint_iterates[b];
      const double denom = xm.squaredNorm() - xn.squaredNorm();
      if (!(denom > 0.0)) continue;
      out.value = std::max(out.value, (xn - xm).squaredNorm() / denom);
    }
  }
  out.exact = false;
  return out;
}

}  // namespace altproj
