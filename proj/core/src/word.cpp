#include "altproj/word.hpp"

#include <unordered_map>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw CapExceeded("word length overflows 64 bits");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw CapExceeded("word length overflows 64 bits");
  return out;
}

void check_exponent(std::uint64_t e) {
  if (e == 0) throw DomainError("word exponents must be >= 1");
}

}  // namespace

Word Word::letter(int a, std::uint64_t exponent) {
  if (a < 1) throw DomainError("letters are numbered from 1");
  check_exponent(exponent);
  Word w;
  w.factors_.push_back({a, nullptr, exponent});
  return w;
}

Word Word::power(WordPtr w, std::uint64_t exponent) {
  if (!w) throw DomainError("Word::power: null word");
  check_exponent(exponent);
  Word out;
  if (w->empty()) return out;
  if (w->factors_.size() == 1) {
    const Factor& f = w->factors_.front();
    out.factors_.push_back({f.letter, f.group, checked_mul(f.exponent, exponent)});
    return out;
  }
  out.factors_.push_back({0, std::move(w), exponent});
  return out;
}

Word& Word::operator*=(const Word& rhs) {
  for (const Factor& f : rhs.factors_) {
    if (!factors_.empty()) {
      Factor& back = factors_.back();
      if (back.group == f.group && back.letter == f.letter) {
        back.exponent = checked_add(back.exponent, f.exponent);
        continue;
      }
    }
    factors_.push_back(f);
  }
  return *this;
}

std::uint64_t Word::length() const {
  std::uint64_t total = 0;
  for (const Factor& f : factors_) {
    const std::uint64_t unit = f.group ? f.group->length() : 1;
    total = checked_add(total, checked_mul(unit, f.exponent));
  }
  return total;
}

std::uint64_t Word::letter_count(int a) const {
  std::uint64_t total = 0;
  for (const Factor& f : factors_) {
    const std::uint64_t unit = f.group ? f.group->letter_count(a) : (f.letter == a ? 1 : 0);
    total = checked_add(total, checked_mul(unit, f.exponent));
  }
  return total;
}

int Word::max_letter() const {
  int m = 0;
  for (const Factor& f : factors_) m = std::max(m, f.group ? f.group->max_letter() : f.letter);
  return m;
}

int Word::letter_at_action(std::uint64_t n) const {
  if (n == 0) throw DomainError("letter_at_action: steps are numbered from 1");
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    const std::uint64_t unit = it->group ? it->group->length() : 1;
    const std::uint64_t span = checked_mul(unit, it->exponent);
    if (n <= span) {
      if (!it->group) return it->letter;
      return it->group->letter_at_action((n - 1) % unit + 1);
    }
    n -= span;
  }
  throw ScheduleExhausted("letter_at_action: step past the end of the word");
}

Word Word::substitute(const std::map<int, WordPtr>& subs) const {
  Word out;
  for (const Factor& f : factors_) {
    if (f.group) {
      out *= power(std::make_shared<const Word>(f.group->substitute(subs)), f.exponent);
      continue;
    }
    const auto it = subs.find(f.letter);
    out *= it == subs.end() ? letter(f.letter, f.exponent) : power(it->second, f.exponent);
  }
  return out;
}

Word Word::relabel(const std::map<int, int>& map) const {
  Word out;
  for (const Factor& f : factors_) {
    if (f.group) {
      out *= power(std::make_shared<const Word>(f.group->relabel(map)), f.exponent);
      continue;
    }
    const auto it = map.find(f.letter);
    out *= letter(it == map.end() ? f.letter : it->second, f.exponent);
  }
  return out;
}

std::string Word::to_string() const {
  std::string s;
  for (const Factor& f : factors_) {
    if (!s.empty()) s += ' ';
    if (f.group) {
      s += '(' + f.group->to_string() + ')';
      if (f.exponent != 1) s += '^' + std::to_string(f.exponent);
    } else {
      s += 'a' + std::to_string(f.letter);
      if (f.exponent != 1) s += '^' + std::to_string(f.exponent);
    }
  }
  return s;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(std::span<const Matrix> ops) : ops_(ops) {
    if (ops.empty()) throw DimensionError("word evaluation: no operators given");
    n_ = ops.front().rows();
    for (const Matrix& m : ops) {
      if (m.rows() != n_ || m.cols() != n_) {
        throw DimensionError("word evaluation: operators must be square and of equal size");
      }
    }
  }

  Index dim() const { return n_; }

  const Matrix& op(int a) const {
    if (a < 1 || static_cast<std::size_t>(a) > ops_.size()) {
      throw DimensionError("word letter a" + std::to_string(a) + " has no operator (" +
                           std::to_string(ops_.size()) + " given)");
    }
    return ops_[static_cast<std::size_t>(a - 1)];
  }

  const Matrix& matrix(const Word& w) {
    const auto it = cache_.find(&w);
    if (it != cache_.end()) return it->second;
    Matrix m = Matrix::Identity(n_, n_);
    for (const Factor& f : w.factors()) m = m * factor_matrix(f);
    return cache_.emplace(&w, std::move(m)).first->second;
  }

  Matrix factor_matrix(const Factor& f) {
    const Matrix& base = f.group ? matrix(*f.group) : op(f.letter);
    return f.exponent == 1 ? base : matrix_power(base, f.exponent);
  }

  Vector apply(const Word& w, Vector x) {
    for (auto it = w.factors().rbegin(); it != w.factors().rend(); ++it) {
      const Factor& f = *it;
      if (f.exponent > kDirectLimit) {
        x = factor_matrix(f) * x;
        continue;
      }
      for (std::uint64_t e = 0; e < f.exponent; ++e) {
        x = f.group ? apply(*f.group, std::move(x)) : Vector(op(f.letter) * x);
      }
    }
    return x;
  }

 private:
  static constexpr std::uint64_t kDirectLimit = 64;

  std::span<const Matrix> ops_;
  Index n_ = 0;
  std::unordered_map<const Word*, Matrix> cache_;
};

bool visit_actions(const Word& w, const std::function<bool(int)>& visit) {
  for (auto it = w.factors().rbegin(); it != w.factors().rend(); ++it) {
    for (std::uint64_t e = 0; e < it->exponent; ++e) {
      if (it->group) {
        if (!visit_actions(*it->group, visit)) return false;
      } else if (!visit(it->letter)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Matrix word_matrix(const Word& w, std::span<const Matrix> ops) {
  Evaluator ev(ops);
  return ev.matrix(w);
}

Vector apply_word(const Word& w, std::span<const Matrix> ops, const Vector& x) {
  Evaluator ev(ops);
  if (x.size() != ev.dim()) throw DimensionError("apply_word: vector dimension mismatch");
  return ev.apply(w, x);
}

void for_each_action(const Word& w, const std::function<bool(int)>& visit) {
  visit_actions(w, visit);
}

Vector apply_word_stepwise(const Word& w, std::span<const Matrix> ops, const Vector& x) {
  Evaluator ev(ops);
  if (x.size() != ev.dim()) throw DimensionError("apply_word_stepwise: vector dimension mismatch");
  Vector y = x;
  for_each_action(w, [&](int a) {
    y = ev.op(a) * y;
    return true;
  });
  return y;
}

}  // namespace altproj
