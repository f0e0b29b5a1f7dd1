#include "altproj/schedule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

void check_indices(const std::vector<int>& seq, int J, const char* what) {
  if (J < 1) throw DomainError(std::string(what) + ": J must be >= 1");
  for (int j : seq) {
    if (j < 1 || j > J) {
      throw DomainError(std::string(what) + ": index " + std::to_string(j) + " outside 1.." +
                        std::to_string(J));
    }
  }
}

int max_of(const std::vector<int>& seq) {
  return seq.empty() ? 0 : *std::max_element(seq.begin(), seq.end());
}

}  // namespace

Schedule Schedule::periodic(std::vector<int> pattern, int J) {
  if (pattern.empty()) throw DomainError("periodic schedule: empty pattern");
  check_indices(pattern, J, "periodic schedule");
  Schedule s;
  s.kind_ = Kind::periodic;
  s.J_ = J;
  s.seq_ = std::move(pattern);
  return s;
}

Schedule Schedule::periodic(std::vector<int> pattern) {
  const int J = max_of(pattern);
  return periodic(std::move(pattern), J);
}

Schedule Schedule::explicit_sequence(std::vector<int> sequence, int J) {
  check_indices(sequence, J, "explicit schedule");
  Schedule s;
  s.kind_ = Kind::explicit_sequence;
  s.J_ = J;
  s.seq_ = std::move(sequence);
  return s;
}

Schedule Schedule::explicit_sequence(std::vector<int> sequence) {
  const int J = std::max(1, max_of(sequence));
  return explicit_sequence(std::move(sequence), J);
}

Schedule Schedule::ruler(int J) {
  if (J < 2) throw DomainError("ruler schedule: J must be >= 2");
  Schedule s;
  s.kind_ = Kind::ruler;
  s.J_ = J;
  return s;
}

Schedule Schedule::constructed(WordPtr w, int J) {
  if (!w) throw DomainError("constructed schedule: null word");
  if (w->max_letter() > J) throw DomainError("constructed schedule: word uses letters above J");
  Schedule s;
  s.kind_ = Kind::constructed;
  s.J_ = J;
  s.word_ = std::move(w);
  return s;
}

int Schedule::emit(std::uint64_t n) const {
  if (n == 0) throw DomainError("Schedule::emit: positions are numbered from 1");
  switch (kind_) {
    case Kind::periodic:
      return seq_[(n - 1) % seq_.size()];
    case Kind::explicit_sequence:
      if (n > seq_.size()) {
        throw ScheduleExhausted("explicit schedule has " + std::to_string(seq_.size()) +
                                " entries; asked for entry " + std::to_string(n));
      }
      return seq_[n - 1];
    case Kind::ruler:
      return std::min(std::countr_zero(n) + 1, J_);
    case Kind::constructed:
      return word_->letter_at_action(n);
  }
  return 0;
}

std::optional<std::uint64_t> Schedule::length() const {
  switch (kind_) {
    case Kind::explicit_sequence:
      return seq_.size();
    case Kind::constructed:
      return word_->length();
    default:
      return std::nullopt;
  }
}

double quasiperiod_index(const Schedule& s, int i) {
  if (i < 1 || i > s.J()) throw DomainError("quasiperiod_index: index outside 1..J");
  switch (s.kind()) {
    case Schedule::Kind::periodic: {
      const auto& p = s.pattern();
      const std::size_t period = p.size();
      std::size_t last = 0;
      std::size_t gap = 0;
      bool seen = false;
      for (std::size_t n = 1; n <= 2 * period; ++n) {
        if (p[(n - 1) % period] != i) continue;
        gap = std::max(gap, n - last);
        last = n;
        seen = true;
      }
      return seen ? static_cast<double>(gap) : kInfinity;
    }
    case Schedule::Kind::ruler:
      return i < s.J() ? std::ldexp(1.0, i) : std::ldexp(1.0, s.J() - 1);
    default:
      throw DomainError(
          "quasiperiod_index: only periodic and ruler schedules have a decidable index");
  }
}

double quasiperiod_bound(const Schedule& s) {
  double bound = 0.0;
  for (int i = 1; i <= s.J(); ++i) bound = std::max(bound, quasiperiod_index(s, i));
  return bound;
}

}  // namespace altproj
