#pragma once
//
// Words in the free semigroup over letters 1..m, stored run-length encoded.
//
// A factor is either a run of one letter or a run of a nested word, so
// constructions such as (a2 a3 a2)^s substituted into (b c b)^r stay small
// even when the expanded length is astronomically large.
//
// Written order is the operator order: in a3 a1 the letter a1 acts first.
//

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "altproj/linalg.hpp"

namespace altproj {

class Word;
using WordPtr = std::shared_ptr<const Word>;

struct Factor {
  int letter = 0;           // 1-based; 0 when `group` is set
  WordPtr group;            // nested word, or null for a letter run
  std::uint64_t exponent = 1;
};

class Word {
 public:
  Word() = default;

  static Word letter(int a, std::uint64_t exponent = 1);
  static Word power(WordPtr w, std::uint64_t exponent);

  // Appends `rhs` on the right: rhs acts before everything already present.
  Word& operator*=(const Word& rhs);
  friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool empty() const noexcept { return factors_.empty(); }

  // Expanded length |w|. Throws CapExceeded if it does not fit in 64 bits.
  std::uint64_t length() const;

  // |w_a|, the number of occurrences of letter a in the expansion.
  std::uint64_t letter_count(int a) const;

  // Largest letter used (0 for the empty word).
  int max_letter() const;

  // The letter applied at step n (1-based) when the word acts on a vector.
  int letter_at_action(std::uint64_t n) const;

  // Replaces every letter a with subs.at(a) (letters absent from the map are
  // kept). Exponents carry over to the replacement.
  Word substitute(const std::map<int, WordPtr>& subs) const;

  // Renames letters through `map`; letters absent from the map are kept.
  Word relabel(const std::map<int, int>& map) const;

  // e.g. "(a2 a3 a2)^149 a1".
  std::string to_string() const;

 private:
  std::vector<Factor> factors_;
};

// Operator product with the letters bound to `ops` (letter a -> ops[a-1]).
// The empty word gives the identity.
Matrix word_matrix(const Word& w, std::span<const Matrix> ops);

// word_matrix(w, ops) * x, but long runs are evaluated through matrix powers
// so the cost does not scale with |w|.
Vector apply_word(const Word& w, std::span<const Matrix> ops, const Vector& x);

// Visits the letters in action order (first-acting letter first). Returns
// early when `visit` returns false. Cost is proportional to |w|.
void for_each_action(const Word& w, const std::function<bool(int)>& visit);

// Letter-by-letter application; the reference route for apply_word.
Vector apply_word_stepwise(const Word& w, std::span<const Matrix> ops, const Vector& x);

}  // namespace altproj
