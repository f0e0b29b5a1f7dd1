#include "altproj/iteration.hpp"

#include <algorithm>
#include <string>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

void check_family(std::span<const Subspace> subspaces, const Vector& x0, const char* what) {
  if (subspaces.empty()) throw DomainError(std::string(what) + ": no subspaces given");
  require_finite(x0, what);
  for (std::size_t j = 0; j < subspaces.size(); ++j) {
    if (subspaces[j].ambient_dim() != x0.size()) {
      throw DimensionError(std::string(what) + ": subspace " + std::to_string(j + 1) +
                           " lives in R^" + std::to_string(subspaces[j].ambient_dim()) +
                           " but x0 has dimension " + std::to_string(x0.size()));
    }
  }
}

}  // namespace

Vector reference_limit(std::span<const Subspace> subspaces, const Vector& x0) {
  check_family(subspaces, x0, "reference_limit");
  return project(intersect(subspaces), x0);
}

Trace run(std::span<const Subspace> subspaces, const Schedule& s, const Vector& x0,
          const RunConfig& cfg) {
  check_family(subspaces, x0, "run");
  if (cfg.max_steps < 1) throw DomainError("run: max_steps must be >= 1");
  if (!(cfg.stop_tol > 0.0)) throw DomainError("run: stop_tol must be positive");
  if (cfg.window_len < 1) throw DomainError("run: window_len must be >= 1");
  if (static_cast<std::size_t>(s.J()) > subspaces.size()) {
    throw DimensionError("run: schedule uses indices up to " + std::to_string(s.J()) + " but only " +
                         std::to_string(subspaces.size()) + " subspaces were given");
  }

  Trace t;
  bool store = cfg.storage == IterateStorage::all;
  if (cfg.storage == IterateStorage::automatic) {
    const auto n = static_cast<std::uint64_t>(x0.size());
    store = cfg.max_steps < kAutoStoreBudget && n * (cfg.max_steps + 1) <= kAutoStoreBudget;
  }
  if (store) t.stored_iterates.emplace().push_back(x0);
  if (cfg.track_residual) t.limit = reference_limit(subspaces, x0);

  Vector x = x0;
  t.iterate_norms.push_back(x.norm());
  int quiet = 0;
  for (std::uint64_t n = 1; n <= cfg.max_steps; ++n) {
    int j = 0;
    try {
      j = s.emit(n);
    } catch (const ScheduleExhausted&) {
      t.schedule_exhausted = true;
      break;
    }
    Vector next = project(subspaces[static_cast<std::size_t>(j - 1)], x);
    const double inc = (next - x).norm();
    x = std::move(next);

    t.indices.push_back(j);
    t.increments.push_back(inc);
    t.iterate_norms.push_back(x.norm());
    bool small = inc < cfg.stop_tol;
    if (t.limit) {
      const double res = (x - *t.limit).norm();
      t.residuals.push_back(res);
      small = small && res < cfg.stop_tol;
    }
    if (store) t.stored_iterates->push_back(x);

    quiet = small ? quiet + 1 : 0;
    if (quiet >= cfg.window_len) {
      t.converged = true;
      break;
    }
  }
  t.final_iterate = std::move(x);
  return t;
}

std::vector<double> kakutani_gaps(std::span<const Subspace> subspaces, const Vector& x0,
                                  std::uint64_t n_max) {
  check_family(subspaces, x0, "kakutani_gaps");
  std::vector<double> gaps;
  gaps.reserve(n_max + 1);
  Vector x = x0;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    Vector tx = x;
    for (const Subspace& s : subspaces) tx = project(s, tx);
    gaps.push_back((x - tx).norm());
    x = std::move(tx);
  }
  return gaps;
}

double sakai_constant(const Trace& trace) {
  if (!trace.stored_iterates) {
    throw DomainError("sakai_constant: the trace was recorded without stored iterates");
  }
  const auto& xs = *trace.stored_iterates;
  const std::size_t steps = xs.size() - 1;
  if (steps < 2) return 0.0;

  std::vector<double> inc_sq(steps + 1, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) inc_sq[k] = (xs[k] - xs[k - 1]).squaredNorm();
  const double floor = 1e-12 * xs[1].norm();
  const double floor_sq = floor * floor;

  // Denominators are accumulated per m rather than read off prefix sums; the
  // late increments are far below the roundoff of an O(1) prefix total.
  double best = 0.0;
  for (std::size_t m = 1; m < steps; ++m) {
    double denom = 0.0;
    for (std::size_t n = m + 1; n <= steps; ++n) {
      denom += inc_sq[n];
      if (!(denom > floor_sq)) continue;
      best = std::max(best, (xs[n] - xs[m]).squaredNorm() / denom);
    }
  }
  return best;
}

}  // namespace altproj
