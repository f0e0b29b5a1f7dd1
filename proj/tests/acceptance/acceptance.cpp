// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "altproj/altproj.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace altproj;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Subspace random_sub(testgen::SplitMix64& g, Index n, Index d) {
  return Subspace::from_orthonormal(testgen::random_basis(g, n, d));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Foundational projection identities on 1000 random cases.
Outcome projection_algebra() {
  testgen::SplitMix64 g(1);
  int failures = 0;
  std::string first;
  const auto check = [&](bool ok, const std::string& what, int trial) {
    if (!ok && failures++ == 0) first = what + " (case " + std::to_string(trial) + ")";
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = g.integer(2, 12);
    const Index d = g.integer(0, static_cast<int>(n));
    const Subspace s = random_sub(g, n, d);
    const Vector x = g.vector(n), y = g.vector(n);
    const Vector px = project(s, x), py = project(s, y);
    check((project(s, px) - px).norm() <= 1e-10, "idempotence", trial);
    check(std::abs(px.dot(y) - x.dot(py)) <= 1e-10, "self-adjointness", trial);
    check(std::abs((x - px).squaredNorm() - (x.squaredNorm() - px.squaredNorm())) <=
              1e-9 * std::max(1.0, x.squaredNorm()),
          "pythagoras", trial);
    check(px.norm() <= x.norm() + 1e-12, "contraction", trial);
    if (d > 0) {
      const Vector in_s = s.basis() * g.vector(d);
      check((x - px).norm() <= (x - in_s).norm() + 1e-10, "closest point", trial);
    }
    // Orthogonal additivity on a split of a random frame.
    const Matrix q = testgen::random_basis(g, n, n);
    const Index du = g.integer(0, static_cast<int>(n));
    const Index dv = g.integer(0, static_cast<int>(n - du));
    const Subspace u = Subspace::from_orthonormal(q.leftCols(du));
    const Subspace v = Subspace::from_orthonormal(q.middleCols(du, dv));
    check((u.projector() + v.projector() - sum(u, v).projector()).cwiseAbs().maxCoeff() <= 1e-10,
          "orthogonal additivity", trial);
    // Kernel chain on vectors built from intersect().
    {
      const Index common = g.integer(1, static_cast<int>(std::min<Index>(2, n - 1)));
      const Matrix shared = testgen::random_basis(g, n, common);
      std::vector<Subspace> subs;
      const int J = g.integer(2, 4);
      for (int j = 0; j < J; ++j) {
        const Index extra = g.integer(0, static_cast<int>(n - common - 1));
        Matrix cols(n, common + extra);
        cols << shared, g.matrix(n, extra);
        subs.push_back(orthonormalize(cols));
      }
      Matrix t = Matrix::Identity(n, n);
      for (const auto& sj : subs) t = sj.projector() * t;
      const Subspace m = intersect(subs);
      const Vector in_m = m.basis() * g.vector(m.dim());
      bool fixed_by_all = true;
      for (const auto& sj : subs) fixed_by_all = fixed_by_all && (project(sj, in_m) - in_m).norm() <= 1e-9 * in_m.norm();
      check(m.dim() >= common && fixed_by_all && (t * in_m - in_m).norm() <= 1e-9 * in_m.norm(),
            "kernel chain", trial);
    }
    check(same_subspace(complement(complement(s)), s), "double complement", trial);
  }
  return {failures == 0, failures == 0 ? "1000 cases" : std::to_string(failures) + " failures, first: " + first};
}

// 2. Two random subspaces of R^8, alternating projections.
Outcome von_neumann() {
  testgen::SplitMix64 g(2);
  int bad = 0;
  double worst = 0.0;
  std::uint64_t slowest = 0;
  std::string slow_cosines;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Subspace> s{random_sub(g, 8, g.integer(1, 7)), random_sub(g, 8, g.integer(1, 7))};
    const Vector x0 = g.vector(8);
    RunConfig cfg;
    cfg.max_steps = 10000;
    cfg.stop_tol = 1e-300;
    cfg.storage = IterateStorage::none;
    const Trace t = run(s, Schedule::periodic({1, 2}), x0, cfg);
    std::uint64_t reached = 0;
    for (std::uint64_t n = 0; n < t.residuals.size(); ++n) {
      if (t.residuals[n] < 1e-8) {
        reached = n + 1;
        break;
      }
    }
    const double best = *std::min_element(t.residuals.begin(), t.residuals.end());
    if (reached == 0) {
      ++bad;
      worst = std::max(worst, best);
      slow_cosines += (slow_cosines.empty() ? "" : ", ") + fmt("%.5f", friedrichs_cosine(s[0], s[1]));
    }
    slowest = std::max(slowest, reached);
  }
  if (bad > 0) return {false, std::to_string(bad) + " of 100 pairs never below 1e-8 (c = " + slow_cosines +
                         "), worst residual " + fmt("%.3g", worst)};
  return {true, "100 pairs, slowest reaches 1e-8 at step " + std::to_string(slowest)};
}

struct Instance {
  std::vector<Subspace> spaces;
  Vector x0;
};

std::vector<Instance> halperin_instances() {
  testgen::SplitMix64 g(3);
  std::vector<Instance> out;
  for (int trial = 0; trial < 30; ++trial) {
    Instance in;
    // A planted common line keeps the limit non-trivial.
    const Matrix shared = testgen::random_basis(g, 10, trial % 2);
    for (int j = 0; j < 3; ++j) {
      const Index extra = g.integer(2, 7);
      Matrix cols(10, shared.cols() + extra);
      cols << shared, g.matrix(10, extra);
      in.spaces.push_back(orthonormalize(cols));
    }
    in.x0 = g.vector(10);
    out.push_back(std::move(in));
  }
  return out;
}

// 3. Periodic schedules over three subspaces of R^10.
Outcome halperin() {
  testgen::SplitMix64 g(33);
  const auto instances = halperin_instances();
  double worst = 0.0, worst_gap = 0.0;
  int bad = 0;
  for (const auto& in : instances) {
    std::vector<int> pattern{1, 2, 3};
    const int extra = g.integer(0, 4);
    for (int e = 0; e < extra; ++e) pattern.push_back(g.integer(1, 3));
    RunConfig cfg;
    cfg.max_steps = 200000;
    cfg.stop_tol = 1e-13;
    cfg.storage = IterateStorage::none;
    const Trace t = run(in.spaces, Schedule::periodic(pattern, 3), in.x0, cfg);
    const double err = (t.final_iterate - reference_limit(in.spaces, in.x0)).norm();
    const auto gaps = kakutani_gaps(in.spaces, in.x0, 20000);
    worst = std::max(worst, err);
    worst_gap = std::max(worst_gap, gaps.back());
    if (!(err < 1e-6) || !(gaps.back() < 1e-10)) ++bad;
  }
  return {bad == 0, "30 instances, worst limit error " + fmt("%.3g", worst) + ", worst final Kakutani gap " +
                        fmt("%.3g", worst_gap)};
}

// 4. Ruler schedules: convergence and the empirical Sakai constant.
Outcome sakai() {
  const auto instances = halperin_instances();
  const Schedule ruler = Schedule::ruler(3);
  const double I = quasiperiod_bound(ruler);
  const double bound = (I - 1) * (I - 2) + 3;
  double worst = 0.0, worst_a = 0.0;
  int bad = 0;
  for (const auto& in : instances) {
    RunConfig cfg;
    cfg.max_steps = 400000;
    cfg.stop_tol = 1e-13;
    cfg.storage = IterateStorage::none;
    const Trace t = run(in.spaces, ruler, in.x0, cfg);
    const double err = (t.final_iterate - reference_limit(in.spaces, in.x0)).norm();
    RunConfig short_cfg;
    short_cfg.max_steps = 2000;
    short_cfg.storage = IterateStorage::all;
    const double a = sakai_constant(run(in.spaces, ruler, in.x0, short_cfg));
    worst = std::max(worst, err);
    worst_a = std::max(worst_a, a);
    if (!(err < 1e-6) || !(a <= bound)) ++bad;
  }
  // Decreasing chains.
  testgen::SplitMix64 g(4);
  double worst_chain = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = g.integer(4, 10);
    const Matrix q = testgen::random_basis(g, n, n);
    const Index d1 = g.integer(2, static_cast<int>(n) - 1);
    const Index d2 = g.integer(1, static_cast<int>(d1) - 1);
    const Index d3 = g.integer(0, static_cast<int>(d2) - 1);
    const std::vector<Subspace> chain{Subspace::from_orthonormal(q.leftCols(d1)),
                                      Subspace::from_orthonormal(q.leftCols(d2)),
                                      Subspace::from_orthonormal(q.leftCols(d3))};
    RunConfig cfg;
    cfg.storage = IterateStorage::all;
    cfg.max_steps = 300;
    const double a = sakai_constant(run(chain, ruler, g.vector(n), cfg));
    worst_chain = std::max(worst_chain, a);
    if (!(a <= 1 + 1e-9)) ++bad;
  }
  return {bad == 0, "worst limit error " + fmt("%.3g", worst) + ", max A " + fmt("%.4g", worst_a) + " (bound " +
                        fmt("%g", bound) + "), max chain A " + fmt("%.12g", worst_chain)};
}

// 5. The two lines x=y and y=0 from (1,2).
Outcome two_lines() {
  Matrix a(2, 1), b(2, 1);
  a << 1, 1;
  b << 1, 0;
  const std::vector<Subspace> s{orthonormalize(a), orthonormalize(b)};
  Vector x0(2);
  x0 << 1, 2;
  RunConfig cfg;
  cfg.max_steps = 100;
  cfg.stop_tol = 1e-300;
  cfg.storage = IterateStorage::all;
  const Trace t = run(s, Schedule::periodic({1, 2}), x0, cfg);
  std::uint64_t first = 0;
  for (std::uint64_t n = 0; n < t.stored_iterates->size(); ++n) {
    if ((*t.stored_iterates)[n].norm() < 1e-10) {
      first = n;
      break;
    }
  }
  const bool ok = first > 0 && first <= 100 && t.final_iterate.norm() < 1e-10;
  return {ok, "||x_n|| < 1e-10 from step " + std::to_string(first)};
}

// 6. Paperclips on a string of length 1.
Outcome thirds() {
  Matrix p1(3, 3), p2(3, 3);
  p1 << 1, 0, 0, 0, 0.5, 0.5, 0, 0.5, 0.5;
  p2 << 0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 1;
  testgen::SplitMix64 g(6);
  bool ok = true;
  double dev3 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vector l(3);
    l << 0.5, 0.3, 0.2;
    if (trial > 0) {
      l << 0.01 + g.uniform(), 0.01 + g.uniform(), 0.01 + g.uniform();
      l /= l.sum();
    }
    const ThirdsResult r = thirds_demo(l(0), l(1), l(2), 15);
    Vector x = l;
    for (int k = 0; k <= 15; ++k) {
      const double left_dev = std::abs(x(0) - 1.0 / 3);
      const double right_dev = std::abs(x(0) + x(1) - 2.0 / 3);
      ok = ok && left_dev <= (2.0 / 3) * std::pow(4.0, -k) + 1e-15 &&
           right_dev <= (1.0 / 3) * std::pow(4.0, 1 - k) + 1e-15;
      ok = ok && std::abs(r.positions[k].left_dev - left_dev) < 1e-14;
      if (k == 3) dev3 = std::max(dev3, left_dev);
      x = p2 * (p1 * x);
    }
    ok = ok && r.bound_ok;
  }
  ok = ok && dev3 < 0.011;
  return {ok, "max left deviation after 3 iterations " + fmt("%.4g", dev3)};
}

// 7. Seeded 20x30 sparse system against the pseudoinverse.
Outcome kaczmarz() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(7);
  const RandomSystem rs = random_consistent_system(rng, 20, 30, 0.2);
  const KaczmarzResult r = solve(rs.system, Vector::Zero(30), 100000, 1e-13);
  const double err = (r.solution - oracle::pinv_solve(rs.system.matrix(), rs.system.rhs())).norm();
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < r.residual_history.size(); ++k)
    monotone = monotone && r.residual_history[k + 1] <= r.residual_history[k];
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {err < 1e-6 && monotone && secs < 5.0,
          "distance to A^+c " + fmt("%.3g", err) + " after " + std::to_string(r.sweeps) + " sweeps, monotone " +
              (monotone ? "yes" : "no")};
}

// 8. Rate identity and the brute-force cosine.
Outcome kayalar_weinert() {
  testgen::SplitMix64 g(8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Subspace a = random_sub(g, 8, g.integer(1, 7));
    const Subspace b = random_sub(g, 8, g.integer(1, 7));
    const RateCurve rc = rate_curve(a, b, 8);
    for (double e : rc.abs_err) worst = std::max(worst, e);
  }
  double worst_bf = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = trial % 2 == 0 ? 2 : 3;
    const Subspace a = random_sub(g, n, g.integer(1, static_cast<int>(n) - 1));
    const Subspace b = random_sub(g, n, g.integer(1, static_cast<int>(n) - 1));
    worst_bf = std::max(worst_bf, std::abs(friedrichs_cosine(a, b) - oracle::brute_force_cosine(a.basis(), b.basis())));
  }
  return {worst < 1e-8 && worst_bf < 1e-4,
          "max |measured - c^(2n-1)| " + fmt("%.3g", worst) + ", max brute-force gap " + fmt("%.3g", worst_bf)};
}

// 9. Quarter circle at eps = 0.5 and 0.3.
Outcome quarter() {
  std::string detail;
  bool ok = true;
  for (double eps : {0.5, 0.3}) {
    const int k = k_of_eps(eps);
    const Index n = k + 2;
    const QuarterCircleResult q = quarter_circle(Subspace::full(n), Vector::Unit(n, 0), Vector::Unit(n, 1), eps);
    ok = ok && q.achieved_error < 2 * eps;
    const Matrix pw = q.W.projector();
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const Matrix px = q.chain[j].projector();
      Eigen::SelfAdjointEigenSolver<Matrix> es(px * pw * px);
      const Vector d = es.eigenvalues().cwiseMax(0.0).array().pow(static_cast<double>(q.r[j])).matrix();
      const Matrix pow = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
      worst = std::max(worst, oracle::spectral_norm(pow - q.h[j + 1] * q.h[j + 1].transpose()) * k / eps);
    }
    ok = ok && worst < 1.0;
    detail += "eps " + fmt("%g", eps) + ": error " + fmt("%.4g", q.achieved_error) + ", max bound/(eps/k) " +
              fmt("%.8g", worst) + "; ";
  }
  return {ok, detail};
}

// 10. Replace projection: the three inequalities and s(k) = 149.
Outcome replace() {
  const Index n = 8;
  const Matrix id = Matrix::Identity(n, n);
  const Subspace X = Subspace::from_orthonormal(id.leftCols(4));
  const std::vector<Subspace> chain{Subspace::from_orthonormal(id.leftCols(2)),
                                    Subspace::from_orthonormal(id.leftCols(3))};
  const ReplaceProjectionResult r = replace_projection(chain, X, Subspace::full(n), 0.1, 0.5);
  const Matrix px = X.projector(), py = r.Y.projector();
  const double eta = oracle::spectral_norm(px - py);
  const Index meet = oracle::intersection_basis({X.basis(), r.Y.basis()}).cols();
  Eigen::SelfAdjointEigenSolver<Matrix> es(px * py * px);
  double worst = 0.0;
  for (std::size_t j = 0; j < chain.size(); ++j) {
    const Vector d = es.eigenvalues().cwiseMax(0.0).array().pow(static_cast<double>(r.s[j])).matrix();
    const Matrix pow = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
    worst = std::max(worst, oracle::spectral_norm(pow - chain[j].projector()));
  }
  const bool ok = eta < 0.5 && meet == 0 && worst < 0.1 && r.s.back() == 149;
  return {ok, "s = (" + std::to_string(r.s[0]) + ", " + std::to_string(r.s[1]) + "), ||P_X - P_Y|| " +
                  fmt("%.4g", eta) + ", dim(X ∩ Y) " + std::to_string(meet) + ", max tier error " + fmt("%.4g", worst)};
}

// 11. Triple at eps = 0.5, eta = 0.25.
Outcome triple() {
  const Index n = 10;
  const Matrix id = Matrix::Identity(n, n);
  const Subspace X = Subspace::from_orthonormal(id.leftCols(5));
  const TripleResult t = build_triple(Subspace::full(n), X, Vector::Unit(n, 0), Vector::Unit(n, 1), 0.5, 0.25);
  const std::vector<Matrix> ops{t.W.projector(), X.projector(), t.Y.projector()};
  const double err = (apply_word(t.psi, ops, Vector::Unit(n, 0)) - Vector::Unit(n, 1)).norm();
  return {err < 1.5, "error " + fmt("%.4g", err) + ", |psi| = " + std::to_string(t.psi.length())};
}

// Shared by 12 and 13.
struct GlueAttempt {
  std::optional<GluedConstruction> c;
  std::string error;
};

const GlueAttempt& spec_glue() {
  static const GlueAttempt attempt = [] {
    GlueAttempt a;
    try {
      a.c = glue(2, {1.0 / 32, 1.0 / 64}, 0);
    } catch (const std::exception& e) {
      a.error = e.what();
    }
    return a;
  }();
  return attempt;
}

// 12. Divergence window for K = 2, eps = (1/32, 1/64).
Outcome divergence_window() {
  const auto start = std::chrono::steady_clock::now();
  const GlueAttempt& a = spec_glue();
  if (!a.c) return {false, "construction failed: " + a.error};
  const GluedConstruction& c = *a.c;
  bool ok = true;
  double budget = 0.0;
  std::string detail;
  for (int k = 0; k < 2; ++k) {
    budget += 4 * c.epsilons[k];
    const double err = (c.checkpoint_iterates[k] - c.e[k + 1]).norm();
    ok = ok && err < budget;
    detail += "||x_n" + std::to_string(k + 1) + " - e" + std::to_string(k + 2) + "|| " + fmt("%.4g", err) + "; ";
  }
  const double gap = (c.checkpoint_iterates[0] - c.checkpoint_iterates[1]).norm();
  // Norms are non-increasing along the iteration, so the last checkpoint bounds them all.
  const double min_norm = c.checkpoint_iterates[1].norm();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && gap > 1.0 && min_norm >= 0.75 && secs < 600;
  return {ok, detail + "gap " + fmt("%.4g", gap) + ", min norm " + fmt("%.4g", min_norm)};
}

// 13. Empirical Sakai constant on the same construction.
Outcome sakai_open_question() {
  const GlueAttempt& a = spec_glue();
  if (!a.c) return {false, "construction failed: " + a.error};
  const SakaiBlowup sb = sakai_blowup(*a.c);
  return {sb.value > 2.0, "A = " + fmt("%.6g", sb.value) + (sb.exact ? " (full trace)" : " (checkpoint ratio)")};
}

// 14. The CLI twice with identical arguments.
Outcome determinism() {
  const std::string exe = ALTPROJ_CLI_EXE;
  const std::string dir = ALTPROJ_ACCEPTANCE_TMP;
  std::ofstream(dir + "/m1.csv") << "1,1,0\n0,1,2\n";
  std::ofstream(dir + "/m2.csv") << "1,0,1\n";
  std::ofstream(dir + "/m3.csv") << "0,1,0\n1,0,3\n";
  const std::vector<std::string> commands{
      "run --spaces " + dir + "/m1.csv " + dir + "/m2.csv " + dir + "/m3.csv --schedule ruler:3 --x0 random --seed 5 --sakai",
      "kaczmarz --random 20x30 --density 0.2 --min-norm --seed 7",
      "angle " + dir + "/m1.csv " + dir + "/m2.csv --n 8",
      "diverge --K 2 --eps 0.5,0.5 --no-budget --eta-override 0.25 --sakai",
      "thirds 0.5 0.3 0.2 --n 15",
  };
  const auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  };
  for (const auto& cmd : commands) {
    std::string outs[2], csvs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const std::string full = exe + " " + cmd + " --out " + dir + "/out.csv > " + dir + "/out.json 2>/dev/null";
      const int rc = std::system(full.c_str());
      if (rc == -1) return {false, "could not launch " + exe};
      outs[rep] = slurp(dir + "/out.json");
      csvs[rep] = slurp(dir + "/out.csv");
      std::remove((dir + "/out.csv").c_str());
    }
    if (outs[0].empty() || csvs[0].empty()) return {false, "no output from: " + cmd};
    if (outs[0] != outs[1] || csvs[0] != csvs[1]) return {false, "outputs differ for: " + cmd};
  }
  return {true, std::to_string(commands.size()) + " subcommands, JSON and CSV byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime budget
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "projection-algebra property suite", 10, projection_algebra},
      {2, "von Neumann: two subspaces of R^8", 30, von_neumann},
      {3, "Halperin: periodic schedules, J=3 in R^10", 30, halperin},
      {4, "Sakai: ruler(3) convergence and A <= 9", 60, sakai},
      {5, "two lines x=y and y=0 from (1,2)", 0, two_lines},
      {6, "string thirds", 0, thirds},
      {7, "Kaczmarz minimal-norm solution", 5, kaczmarz},
      {8, "Kayalar-Weinert identity and brute-force cosine", 0, kayalar_weinert},
      {9, "quarter-circle construction", 60, quarter},
      {10, "replace-projection construction", 0, replace},
      {11, "triple error < 3 eps", 0, triple},
      {12, "gluing: divergence window K=2, eps=(1/32,1/64)", 600, divergence_window},
      {13, "Sakai constant on the K=2 construction exceeds 2", 0, sakai_open_question},
      {14, "CLI determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += " [over the " + fmt("%g", c.budget_s) + " s budget]";
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d  %-50s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
