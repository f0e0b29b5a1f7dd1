#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "altproj/altproj.hpp"

namespace altproj::cli {

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::uint64_t max_steps = 10000;
  std::string out;
  bool timing = false;
};

json vec_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  body(f);
  f.flush();
  if (!f) throw Error("failed writing '" + path + "'");
}

json base_report(const std::string& command, const Globals& g) {
  json r;
  r["command"] = command;
  r["inputs"] = json::object();
  r["inputs"]["seed"] = g.seed;
  r["inputs"]["tol"] = g.tol;
  r["inputs"]["max_steps"] = g.max_steps;
  r["outputs"] = json::array();
  return r;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::vector<std::string> spaces;
  std::string schedule;
  std::string x0 = "random";
  bool sakai = false;
};

int cmd_run(const RunArgs& a, const Globals& g, json& report, std::ostream& err) {
  report["inputs"]["spaces"] = a.spaces;
  report["inputs"]["schedule"] = a.schedule;
  report["inputs"]["x0"] = a.x0;
  report["inputs"]["sakai"] = a.sakai;

  std::vector<Subspace> subspaces;
  for (const auto& path : a.spaces) subspaces.push_back(io::read_subspace(path));
  const Index n = subspaces.front().ambient_dim();
  for (std::size_t i = 1; i < subspaces.size(); ++i) {
    if (subspaces[i].ambient_dim() != n) {
      throw DimensionError(a.spaces[i] + ": vectors have " + std::to_string(subspaces[i].ambient_dim()) +
                           " entries, " + a.spaces.front() + " has " + std::to_string(n));
    }
  }
  const Schedule schedule = io::parse_schedule(a.schedule, static_cast<int>(subspaces.size()));

  Vector x0;
  if (a.x0 == "random") {
    Rng rng(g.seed);
    x0 = rng.normal_vector(n);
  } else {
    x0 = io::parse_vector(a.x0, "--x0");
    if (x0.size() != n) {
      throw DimensionError("--x0 has " + std::to_string(x0.size()) + " entries, the subspaces live in R^" +
                           std::to_string(n));
    }
  }

  RunConfig cfg;
  cfg.max_steps = g.max_steps;
  cfg.stop_tol = g.tol;
  cfg.storage = a.sakai ? IterateStorage::all : IterateStorage::none;
  const Trace t = run(subspaces, schedule, x0, cfg);

  report["ambient_dim"] = n;
  report["steps_executed"] = t.steps();
  report["converged"] = t.converged;
  report["schedule_exhausted"] = t.schedule_exhausted;
  report["final_residual"] = t.residuals.empty() ? json(nullptr) : json(t.residuals.back());
  report["final_increment"] = t.increments.empty() ? json(nullptr) : json(t.increments.back());
  report["final_iterate"] = vec_json(t.final_iterate);
  if (t.limit) report["limit"] = vec_json(*t.limit);
  if (a.sakai) report["sakai_constant"] = sakai_constant(t);
  if (schedule.kind() == Schedule::Kind::periodic || schedule.kind() == Schedule::Kind::ruler) {
    const double bound = quasiperiod_bound(schedule);
    report["quasiperiod_bound"] = std::isfinite(bound) ? json(bound) : json(nullptr);
  }

  if (!g.out.empty()) {
    write_file(g.out, [&](std::ostream& f) { io::write_trace_csv(f, t); });
    report["outputs"].push_back(g.out);
  }
  if (!t.converged) {
    err << "run: no convergence within " << t.steps() << " steps\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- kaczmarz --------------------------------------------------------------

struct KaczmarzArgs {
  std::string system;
  std::string random;
  double density = 0.1;
  bool dense = false;
  std::string x0;
  bool min_norm = false;
  std::optional<std::uint64_t> sweeps;
  std::string solution;
};

int cmd_kaczmarz(const KaczmarzArgs& a, const Globals& g, json& report, std::ostream& err) {
  std::optional<LinearSystem> sys;
  std::optional<Vector> planted;
  if (!a.random.empty()) {
    const auto x = a.random.find('x');
    long long rows = 0, cols = 0;
    try {
      if (x == std::string::npos) throw std::invalid_argument("x");
      std::size_t used = 0;
      rows = std::stoll(a.random.substr(0, x), &used);
      if (used != x) throw std::invalid_argument("rows");
      cols = std::stoll(a.random.substr(x + 1), &used);
      if (used != a.random.size() - x - 1) throw std::invalid_argument("cols");
    } catch (const std::logic_error&) {
      throw DomainError("--random expects ROWSxCOLS, got '" + a.random + "'");
    }
    if (rows < 1 || cols < 1) throw DomainError("--random needs positive sizes");
    if (!(a.density > 0.0 && a.density <= 1.0)) throw DomainError("--density must lie in (0, 1]");
    Rng rng(g.seed);
    RandomSystem rs = random_consistent_system(rng, rows, cols, a.density);
    sys.emplace(std::move(rs.system));
    planted = std::move(rs.planted);
    report["inputs"]["random"] = a.random;
    report["inputs"]["density"] = a.density;
  } else {
    sys.emplace(io::read_system(a.system, a.dense));
    report["inputs"]["system"] = a.system;
    report["inputs"]["dense"] = a.dense;
  }
  const Index n = sys->ambient_dim();

  Vector x0 = Vector::Zero(n);
  if (!a.x0.empty() && !a.min_norm) {
    x0 = io::parse_vector(a.x0, "--x0");
    if (x0.size() != n) {
      throw DimensionError("--x0 has " + std::to_string(x0.size()) + " entries, the system has " +
                           std::to_string(n) + " unknowns");
    }
  }
  const std::uint64_t sweeps = a.sweeps.value_or(g.max_steps);
  report["inputs"]["x0"] = a.x0.empty() || a.min_norm ? json("0") : json(a.x0);
  report["inputs"]["min_norm"] = a.min_norm || a.x0.empty();
  report["inputs"]["sweeps"] = sweeps;

  const KaczmarzResult r = solve(*sys, x0, sweeps, g.tol);
  report["rows"] = sys->rows();
  report["ambient_dim"] = n;
  report["steps_executed"] = r.sweeps;
  report["converged"] = r.converged;
  report["suspected_inconsistent"] = r.suspected_inconsistent;
  report["final_residual"] = r.residual_history.empty() ? json(nullptr) : json(r.residual_history.back());
  if (planted) report["planted_distance"] = (r.solution - *planted).norm();

  if (!g.out.empty()) {
    write_file(g.out, [&](std::ostream& f) { io::write_residual_csv(f, r.residual_history); });
    report["outputs"].push_back(g.out);
  }
  if (!a.solution.empty()) {
    write_file(a.solution, [&](std::ostream& f) { io::write_vector(f, r.solution); });
    report["outputs"].push_back(a.solution);
  } else {
    report["solution"] = vec_json(r.solution);
  }
  if (r.suspected_inconsistent) err << "kaczmarz: the system looks inconsistent\n";
  if (!r.converged) {
    err << "kaczmarz: residual above tol after " << r.sweeps << " sweeps\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- angle -----------------------------------------------------------------

struct AngleArgs {
  std::string space1, space2;
  int n = 8;
};

int cmd_angle(const AngleArgs& a, const Globals& g, json& report, std::ostream& err) {
  report["inputs"]["space1"] = a.space1;
  report["inputs"]["space2"] = a.space2;
  report["inputs"]["n"] = a.n;
  const Subspace s1 = io::read_subspace(a.space1);
  const Subspace s2 = io::read_subspace(a.space2);
  if (s1.ambient_dim() != s2.ambient_dim()) {
    throw DimensionError(a.space2 + ": vectors have " + std::to_string(s2.ambient_dim()) + " entries, " +
                         a.space1 + " has " + std::to_string(s1.ambient_dim()));
  }
  if (a.n < 1) throw DomainError("--n must be at least 1");

  const RateCurve rc = rate_curve(s1, s2, a.n);
  double worst = 0.0;
  for (double e : rc.abs_err) worst = std::max(worst, e);
  report["c"] = rc.c;
  report["steps_executed"] = rc.measured.size();
  report["max_abs_err"] = worst;
  report["all_within_tol"] = rc.all_within_tol();
  report["converged"] = rc.all_within_tol();
  report["rows"] = json::array();
  for (std::size_t i = 0; i < rc.measured.size(); ++i) {
    report["rows"].push_back({{"n", i + 1},
                              {"measured", rc.measured[i]},
                              {"predicted", rc.predicted[i]},
                              {"abs_err", rc.abs_err[i]}});
  }
  if (!g.out.empty()) {
    write_file(g.out, [&](std::ostream& f) { io::write_rate_csv(f, rc); });
    report["outputs"].push_back(g.out);
  }
  if (!rc.all_within_tol()) {
    err << "angle: some rows differ from c^(2n-1) by " << RateCurve::kRateTol << " or more\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- diverge ---------------------------------------------------------------

struct DivergeArgs {
  int K = 2;
  std::string eps;
  bool sakai = false;
  std::optional<double> eta_override;
  bool no_budget = false;
  std::uint64_t r_cap = QuarterCircleOptions{}.r_cap;
  std::uint64_t s_cap = ReplaceProjectionOptions{}.s_cap;
  double margin = ReplaceProjectionOptions{}.margin;
};

constexpr const char* kCaveat =
    "In finite dimensions every schedule converges, so this is a finite window: the iterates "
    "visit neighbourhoods of e_1, ..., e_{K+1} at the checkpoints and then still converge.";

int cmd_diverge(const DivergeArgs& a, const Globals& g, json& report, std::ostream& err) {
  if (a.K < 1) throw DomainError("--K must be at least 1");
  std::vector<double> eps;
  if (a.eps.empty()) {
    eps = default_epsilons(a.K);
  } else {
    const Vector v = io::parse_vector(a.eps, "--eps");
    eps.assign(v.data(), v.data() + v.size());
    if (static_cast<int>(eps.size()) != a.K) {
      throw DomainError("--eps lists " + std::to_string(eps.size()) + " values, --K is " +
                        std::to_string(a.K));
    }
  }
  report["inputs"]["K"] = a.K;
  report["inputs"]["epsilons"] = eps;
  report["inputs"]["sakai"] = a.sakai;
  report["inputs"]["eta_override"] = a.eta_override ? json(*a.eta_override) : json(nullptr);
  report["inputs"]["enforce_budget"] = !a.no_budget;
  report["inputs"]["r_cap"] = a.r_cap;
  report["inputs"]["s_cap"] = a.s_cap;
  report["inputs"]["margin"] = a.margin;
  report["caveat"] = kCaveat;

  GlueOptions opts;
  opts.enforce_budget = !a.no_budget;
  opts.eta_override = a.eta_override;
  opts.triple.quarter.r_cap = a.r_cap;
  opts.triple.replace.s_cap = a.s_cap;
  opts.triple.replace.margin = a.margin;
  const GluedConstruction c = glue(a.K, eps, g.seed, opts);

  report["ambient_dim"] = c.ambient_dim;
  report["K"] = c.K;
  report["epsilons"] = c.epsilons;
  report["triples"] = json::array();
  for (const auto& t : c.triples) {
    report["triples"].push_back({{"k", t.k},
                                 {"r", t.r},
                                 {"s", t.s},
                                 {"psi_length", t.psi_length},
                                 {"N", t.N},
                                 {"delta", t.delta},
                                 {"eta", t.eta},
                                 {"eta_achieved", t.eta_achieved},
                                 {"triple_error", t.triple_error}});
  }
  report["checkpoints"] = c.checkpoints;
  report["verified_bounds"] = json::object();
  for (std::size_t i = 0; i < c.verified_bounds.size(); ++i) {
    report["verified_bounds"][std::to_string(i + 1)] = c.verified_bounds[i];
  }
  report["checkpoint_errors"] = c.checkpoint_errors;
  report["non_cauchy_gap"] = c.non_cauchy_gap;
  report["intersection_dim"] = c.intersection_dim;
  report["verified"] = c.verified;
  report["steps_executed"] = c.checkpoints.empty() ? 0 : c.checkpoints.back();
  report["converged"] = false;
  if (a.sakai) {
    const SakaiBlowup sb = sakai_blowup(c);
    report["sakai"] = {{"value", sb.value}, {"exact", sb.exact}};
  }

  if (!g.out.empty()) {
    write_file(g.out, [&](std::ostream& f) {
      f << "k,n_k,norm,error\n";
      for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        f << (i + 1) << ',' << c.checkpoints[i] << ',' << io::format_double(c.checkpoint_iterates[i].norm())
          << ',' << io::format_double(c.checkpoint_errors[i]) << '\n';
      }
    });
    report["outputs"].push_back(g.out);
  }
  if (!c.verified) {
    err << "diverge: construction built but a checkpoint bound failed verification\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- thirds ----------------------------------------------------------------

struct ThirdsArgs {
  double x = 0.0, y = 0.0, z = 0.0;
  int n = 3;
};

int cmd_thirds(const ThirdsArgs& a, const Globals& g, json& report, std::ostream& err) {
  report["inputs"]["lengths"] = {a.x, a.y, a.z};
  report["inputs"]["n"] = a.n;
  if (a.n < 0) throw DomainError("--n must be non-negative");
  const ThirdsResult r = thirds_demo(a.x, a.y, a.z, a.n);
  report["steps_executed"] = a.n;
  report["bound_ok"] = r.bound_ok;
  report["positions"] = json::array();
  for (const auto& s : r.positions) {
    report["positions"].push_back({{"k", s.k},
                                   {"lengths", vec_json(s.lengths)},
                                   {"left", s.left},
                                   {"right", s.right},
                                   {"left_dev", s.left_dev},
                                   {"right_dev", s.right_dev},
                                   {"left_bound", s.left_bound},
                                   {"right_bound", s.right_bound}});
  }
  if (!g.out.empty()) {
    write_file(g.out, [&](std::ostream& f) {
      f << "k,x,y,z,left,right,left_dev,right_dev\n";
      for (const auto& s : r.positions) {
        f << s.k;
        for (double v : {s.lengths(0), s.lengths(1), s.lengths(2), s.left, s.right, s.left_dev,
                         s.right_dev}) {
          f << ',' << io::format_double(v);
        }
        f << '\n';
      }
    });
    report["outputs"].push_back(g.out);
  }
  if (!r.bound_ok) {
    err << "thirds: a deviation exceeded its bound\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alternating projections: iteration, Kaczmarz, rate analysis and the divergence window"};
  app.name("altproj");
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "PRNG seed (default 0)");
  app.add_option("--tol", g.tol, "Stopping tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  app.add_option("--max-steps", g.max_steps, "Step or sweep limit (default 10000)");
  app.add_option("--out", g.out, "CSV output path");
  app.add_flag("--timing", g.timing, "Add elapsed_ms to the report");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Iterate projections along a schedule");
  run_cmd->fallthrough();
  run_cmd->add_option("--spaces", ra.spaces, "Subspace files")->required()->expected(1, -1);
  run_cmd->add_option("--schedule", ra.schedule, "periodic:1,2,3 | ruler:J | file:PATH")->required();
  run_cmd->add_option("--x0", ra.x0, "Starting vector as a,b,c or 'random'");
  run_cmd->add_flag("--sakai", ra.sakai, "Store iterates and report the empirical Sakai constant");

  KaczmarzArgs ka;
  auto* kac_cmd = app.add_subcommand("kaczmarz", "Solve a linear system by cyclic hyperplane projection");
  kac_cmd->fallthrough();
  auto* sys_opt = kac_cmd->add_option("system", ka.system, "System file");
  auto* rnd_opt = kac_cmd->add_option("--random", ka.random, "Seeded consistent ROWSxCOLS system");
  sys_opt->excludes(rnd_opt);
  kac_cmd->add_option("--density", ka.density, "Non-zero probability for --random (default 0.1)");
  kac_cmd->add_flag("--dense", ka.dense, "System file is dense CSV");
  auto* x0_opt = kac_cmd->add_option("--x0", ka.x0, "Starting vector");
  kac_cmd->add_flag("--min-norm", ka.min_norm, "Start from 0 (minimal-norm solution)")->excludes(x0_opt);
  kac_cmd->add_option("--sweeps", ka.sweeps, "Sweep limit (default --max-steps)");
  kac_cmd->add_option("--solution", ka.solution, "Write the solution vector here");

  AngleArgs aa;
  auto* ang_cmd = app.add_subcommand("angle", "Friedrichs cosine and the rate curve");
  ang_cmd->fallthrough();
  ang_cmd->add_option("space1", aa.space1, "First subspace file")->required();
  ang_cmd->add_option("space2", aa.space2, "Second subspace file")->required();
  ang_cmd->add_option("--n", aa.n, "Rows in the rate curve (default 8)");

  DivergeArgs da;
  auto* div_cmd = app.add_subcommand("diverge", "Build the glued three-space construction");
  div_cmd->fallthrough();
  div_cmd->add_option("--K", da.K, "Number of triples (default 2)");
  div_cmd->add_option("--eps", da.eps, "Comma-separated eps_1..eps_K (default 2^-(i+4))");
  div_cmd->add_flag("--sakai", da.sakai, "Report the empirical Sakai constant");
  div_cmd->add_option("--eta-override", da.eta_override, "Use this eta for every triple");
  div_cmd->add_flag("--no-budget", da.no_budget, "Allow 4 * sum(eps) >= 1/2");
  div_cmd->add_option("--r-cap", da.r_cap, "Cap on quarter-circle exponents");
  div_cmd->add_option("--s-cap", da.s_cap, "Cap on replace-projection exponents");
  div_cmd->add_option("--margin", da.margin, "Relative safety margin of the beta ladder");

  ThirdsArgs ta;
  auto* thi_cmd = app.add_subcommand("thirds", "Divide a string into thirds with two paperclips");
  thi_cmd->fallthrough();
  thi_cmd->add_option("x", ta.x)->required();
  thi_cmd->add_option("y", ta.y)->required();
  thi_cmd->add_option("z", ta.z)->required();
  thi_cmd->add_option("--n", ta.n, "Iterations (default 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitError;
  }

  if (!ka.system.empty() && !ka.random.empty()) {
    err << "kaczmarz: give either a system file or --random\n";
    return kExitError;
  }
  if (kac_cmd->parsed() && ka.system.empty() && ka.random.empty()) {
    err << "kaczmarz: a system file or --random is required\n";
    return kExitError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  json report = base_report(name, g);
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (run_cmd->parsed()) code = cmd_run(ra, g, report, err);
    else if (kac_cmd->parsed()) code = cmd_kaczmarz(ka, g, report, err);
    else if (ang_cmd->parsed()) code = cmd_angle(aa, g, report, err);
    else if (div_cmd->parsed()) code = cmd_diverge(da, g, report, err);
    else code = cmd_thirds(ta, g, report, err);
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << '\n';
    report["error"] = e.what();
    code = kExitError;
  }
  if (g.timing) {
    report["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  report["exit_code"] = code;
  out << report.dump(2) << '\n';
  return code;
}

}  // namespace altproj::cli
