#pragma once
//
// Index schedules (j_n) over {1..J}.
//

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "altproj/word.hpp"

namespace altproj {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Schedule {
 public:
  enum class Kind { periodic, explicit_sequence, ruler, constructed };

  static Schedule periodic(std::vector<int> pattern, int J);
  // J defaults to the largest index in the pattern.
  static Schedule periodic(std::vector<int> pattern);
  static Schedule explicit_sequence(std::vector<int> sequence, int J);
  static Schedule explicit_sequence(std::vector<int> sequence);
  // 1,2,1,3,1,2,1,4,... with values above J replaced by J.
  static Schedule ruler(int J);
  // The letters of `w` in action order; finite, length |w|.
  static Schedule constructed(WordPtr w, int J);

  Kind kind() const noexcept { return kind_; }
  int J() const noexcept { return J_; }
  const std::vector<int>& pattern() const noexcept { return seq_; }
  const WordPtr& word() const noexcept { return word_; }

  // j_n for n >= 1. Throws ScheduleExhausted past the end of a finite schedule.
  int emit(std::uint64_t n) const;

  // Number of entries, or nullopt for infinite schedules.
  std::optional<std::uint64_t> length() const;

 private:
  Schedule() = default;

  Kind kind_ = Kind::periodic;
  int J_ = 0;
  std::vector<int> seq_;
  WordPtr word_;
};

// I(s,i) = sup of the gaps between consecutive occurrences of i, counting from
// position 0. kInfinity when i never occurs. Only periodic and ruler schedules
// have a decidable value; other kinds throw DomainError.
double quasiperiod_index(const Schedule& s, int i);

// max over i in 1..J of quasiperiod_index.
double quasiperiod_bound(const Schedule& s);

}  // namespace altproj
