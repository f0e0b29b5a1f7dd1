#pragma once
// Finite realization of the three-space divergence construction: a word of
// projections onto three subspaces that carries e_1 close to e_2, then e_3,
// and so on, so the iterates pass near an orthonormal set.
//
// In R^n the full iteration converges for every schedule, so what is built
// here is a window of K checkpoints along which the iterates stay far apart,
// not a divergent sequence.
//

#include <cstdint>
#include <optional>
#include <vector>

#include "altproj/linalg.hpp"
#include "altproj/word.hpp"

namespace altproj {

// Smallest k >= 1 with cos(pi/2k)^k > 1 - eps, for 0 < eps <= 1.
int k_of_eps(double eps);

struct QuarterCircleOptions {
  std::uint64_t r_cap = 1'000'000;
  int max_halvings = 60;
};

struct QuarterCircleResult {
  int k = 0;
  std::vector<Vector> h;         // h_0 = u, ..., h_k = v
  std::vector<Vector> z;         // z_0 .. z_{k-1}, orthonormal in X ∩ W⊥
  std::vector<double> alphas;    // alpha_0 > ... > alpha_{k-1} > alpha_k = 0
  std::vector<Subspace> chain;   // X_1 ⊂ ... ⊂ X_k
  std::vector<std::uint64_t> r;  // r(1)..r(k)
  std::vector<double> bounds;    // ||(P_{X_j} P_W P_{X_j})^{r(j)} - P_{h_j}||
  Word phi;                      // letters: 1 = W, j+1 = X_j
  Subspace W;
  double consecutive_error = 0.0;  // ||P_{h_k} ... P_{h_1} u - v||
  double achieved_error = 0.0;     // ||phi(P_W, P_{X_1}, ..) u - v||
};

// u, v orthonormal in X; dim X >= k(eps) + 2.
QuarterCircleResult quarter_circle(const Subspace& X, const Vector& u, const Vector& v,
                                   double eps, double alpha0 = 0.5,
                                   const QuarterCircleOptions& opts = {});

struct ReplaceProjectionOptions {
  std::uint64_t s_cap = 10'000'000'000'000ULL;
  // The ladder is solved against eps * (1 - margin) so the verified operator
  // norms clear eps despite roundoff.
  double margin = 1e-3;
};

struct ReplaceProjectionResult {
  Subspace Y;
  std::vector<std::uint64_t> s;     // s(1) > ... > s(k)
  std::vector<double> betas;        // beta_1 < ... < beta_{k+1}
  std::vector<double> tier_errors;  // ||(P_X P_Y P_X)^{s(j)} - P_{X_j}||
  double eta_achieved = 0.0;        // ||P_X - P_Y||
  Index intersection_dim = 0;       // dim(X ∩ Y)
};

// The beta/s ladder alone. Throws CapExceeded when an exponent passes s_cap.
void replace_projection_ladder(int k, double eps, double eta, std::uint64_t a,
                               const ReplaceProjectionOptions& opts,
                               std::vector<std::uint64_t>& s, std::vector<double>& betas);

// chain ⊆ X ⊆ E, dim(X⊥ ∩ E) >= dim X.
ReplaceProjectionResult replace_projection(const std::vector<Subspace>& chain, const Subspace& X,
                                           const Subspace& E, double eps, double eta,
                                           std::uint64_t a = 1,
                                           const ReplaceProjectionOptions& opts = {});

struct TripleOptions {
  double alpha0 = 0.5;
  QuarterCircleOptions quarter;
  ReplaceProjectionOptions replace;
};

struct TripleResult {
  Subspace W, X, Y;
  Word psi;  // letters: 1 = W, 2 = X, 3 = Y
  double eta_achieved = 0.0;
  double achieved_error = 0.0;
  std::vector<std::uint64_t> s;
  std::vector<double> betas;
  QuarterCircleResult quarter;
  ReplaceProjectionResult replace;
  std::uint64_t N = 0;  // |psi_1| = |phi_1|
};

TripleResult build_triple(const Subspace& E, const Subspace& X, const Vector& u, const Vector& v,
                          double eps, double eta, const TripleOptions& opts = {});

// Same, reusing a quarter-circle result computed for (X, u, v, eps).
TripleResult build_triple(const Subspace& E, const Subspace& X, const Vector& u, const Vector& v,
                          double eps, double eta, QuarterCircleResult quarter,
                          const TripleOptions& opts = {});

struct GlueOptions {
  TripleOptions triple;
  // Reject epsilon lists with 4 * sum >= 1/2.
  bool enforce_budget = true;
  // Use this eta for every triple instead of min(delta_{i-1}, delta_{i+1}).
  std::optional<double> eta_override;
};

struct GluedTriple {
  int k = 0;
  std::vector<std::uint64_t> r;
  std::vector<std::uint64_t> s;
  std::uint64_t psi_length = 0;
  std::uint64_t N = 0;
  double delta = 0.0;
  double eta = 0.0;
  double eta_achieved = 0.0;
  double triple_error = 0.0;  // ||psi(P_W, P_X, P_Y) e_i - e_{i+1}|| inside the block
};

struct GluedConstruction {
  Index ambient_dim = 0;
  int K = 0;
  std::vector<double> epsilons;
  Subspace M1, M2, M3;
  std::vector<Vector> e;            // e_1 .. e_{K+1}
  std::vector<WordPtr> words;       // Psi^(1) .. Psi^(K) over letters 1..3 = M1..M3
  WordPtr schedule_word;            // Psi^(K) ... Psi^(1)
  std::vector<std::uint64_t> checkpoints;  // n_1 .. n_K
  std::vector<GluedTriple> triples;
  std::vector<double> verified_bounds;     // ||Psi^(i) e_i - e_{i+1}||
  std::vector<Vector> checkpoint_iterates; // x_{n_1} .. x_{n_K} from x_0 = e_1
  std::vector<double> checkpoint_errors;   // ||x_{n_k} - e_{k+1}||
  double non_cauchy_gap = 0.0;             // min_{k<l} ||x_{n_k} - x_{n_l}||
  Index intersection_dim = 0;              // dim(M1 ∩ M2 ∩ M3)
  bool verified = false;                   // every bound and the intersection check hold

  std::vector<Matrix> projectors() const;  // P_M1, P_M2, P_M3
};

GluedConstruction glue(int K, const std::vector<double>& epsilons, std::uint64_t seed,
                       const GlueOptions& opts = {});

// Default epsilon schedule 2^-(i+4), i = 1..K.
std::vector<double> default_epsilons(int K);

struct SakaiBlowup {
  double value = 0.0;
  // true: sakai_constant over the full stored trace. false: the schedule was
  // too long to store, and value is the ratio over checkpoint pairs, using
  // sum of squared increments = ||x_m||^2 - ||x_n||^2.
  bool exact = false;
};

SakaiBlowup sakai_blowup(const GluedConstruction& c, std::uint64_t max_run_steps = 4000);

}  // namespace altproj
