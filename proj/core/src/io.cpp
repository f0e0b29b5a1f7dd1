#include "altproj/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "altproj/errors.hpp"

namespace altproj::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

double parse_double(std::string_view tok, const std::string& origin, std::size_t line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(origin, line, "expected a number, got '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(origin, line, "non-finite value");
  return v;
}

long long parse_int(std::string_view tok, const std::string& origin, std::size_t line) {
  tok = trim(tok);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(origin, line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Vector parse_vector(std::string_view text, const std::string& origin, std::size_t line) {
  std::vector<double> vals;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    vals.push_back(parse_double(text.substr(start, comma - start), origin, line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

Subspace parse_subspace(std::istream& in, const std::string& origin) {
  std::vector<Vector> rows;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = strip_comment(raw);
    if (line.empty()) continue;
    Vector v = parse_vector(line, origin, lineno);
    if (!rows.empty() && v.size() != rows.front().size()) {
      throw ParseError(origin, lineno,
                       "vector has " + std::to_string(v.size()) + " entries, expected " +
                           std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw ParseError(origin, lineno, "no basis vectors found");
  return orthonormalize(std::span<const Vector>(rows), rows.front().size(), 1e-10);
}

Subspace read_subspace(const std::string& path) {
  auto in = open(path);
  return parse_subspace(in, path);
}

LinearSystem parse_system(std::istream& in, const std::string& origin, bool dense) {
  std::string raw;
  std::size_t lineno = 0;
  std::vector<Hyperplane> rows;

  if (dense) {
    Index n = -1;
    while (std::getline(in, raw)) {
      ++lineno;
      const auto line = strip_comment(raw);
      if (line.empty()) continue;
      const Vector v = parse_vector(line, origin, lineno);
      if (v.size() < 2) throw ParseError(origin, lineno, "a row needs at least one coefficient and c");
      if (n < 0) n = v.size() - 1;
      if (v.size() - 1 != n) {
        throw ParseError(origin, lineno, "row has " + std::to_string(v.size() - 1) +
                                             " coefficients, expected " + std::to_string(n));
      }
      if (v.head(n).isZero(0.0)) throw ParseError(origin, lineno, "row has a zero normal");
      rows.push_back({v.head(n), v(n)});
    }
    if (rows.empty()) throw ParseError(origin, lineno, "no rows found");
    return LinearSystem(n, std::move(rows));
  }

  long long n = -1, J = -1;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = strip_comment(raw);
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (n < 0) {
      if (tok.size() != 2) throw ParseError(origin, lineno, "header must be 'n J'");
      n = parse_int(tok[0], origin, lineno);
      J = parse_int(tok[1], origin, lineno);
      if (n < 1 || J < 0) throw ParseError(origin, lineno, "header needs n >= 1 and J >= 0");
      continue;
    }
    if (tok.size() < 2) throw ParseError(origin, lineno, "row must be 'c k idx val ...'");
    const double c = parse_double(tok[0], origin, lineno);
    const long long k = parse_int(tok[1], origin, lineno);
    if (k < 0 || tok.size() != static_cast<std::size_t>(2 + 2 * k)) {
      throw ParseError(origin, lineno, "row declares " + std::to_string(k) + " entries but has " +
                                           std::to_string((tok.size() - 2) / 2));
    }
    Vector y = Vector::Zero(n);
    for (long long e = 0; e < k; ++e) {
      const long long idx = parse_int(tok[2 + 2 * e], origin, lineno);
      if (idx < 0 || idx >= n) {
        throw ParseError(origin, lineno, "index " + std::to_string(idx) + " outside 0.." +
                                             std::to_string(n - 1));
      }
      y(idx) += parse_double(tok[3 + 2 * e], origin, lineno);
    }
    if (y.isZero(0.0)) throw ParseError(origin, lineno, "row has a zero normal");
    rows.push_back({std::move(y), c});
  }
  if (n < 0) throw ParseError(origin, lineno, "missing header 'n J'");
  if (static_cast<long long>(rows.size()) != J) {
    throw ParseError(origin, lineno, "header declares " + std::to_string(J) + " rows, found " +
                                         std::to_string(rows.size()));
  }
  return LinearSystem(n, std::move(rows));
}

LinearSystem read_system(const std::string& path, bool dense) {
  auto in = open(path);
  return parse_system(in, path, dense);
}

Schedule parse_schedule(std::string_view spec, int J) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("schedule '" + std::string(spec) + "': expected periodic:, ruler: or file:");
  }
  const auto kind = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  const std::string origin = "--schedule";
  if (kind == "ruler") {
    const long long rj = parse_int(body, origin, 1);
    if (rj > J) {
      throw DomainError("schedule ruler:" + std::to_string(rj) + " needs " + std::to_string(rj) +
                        " subspaces, " + std::to_string(J) + " given");
    }
    return Schedule::ruler(static_cast<int>(rj));
  }
  std::vector<int> seq;
  if (kind == "periodic") {
    for (auto tok : split_ws(body)) seq.push_back(static_cast<int>(parse_int(tok, origin, 1)));
    return Schedule::periodic(std::move(seq), J);
  }
  if (kind == "file") {
    const std::string path(body);
    auto in = open(path);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      for (auto tok : split_ws(strip_comment(raw))) {
        const long long v = parse_int(tok, path, lineno);
        if (v < 1 || v > J) {
          throw ParseError(path, lineno, "index " + std::to_string(v) + " outside 1.." + std::to_string(J));
        }
        seq.push_back(static_cast<int>(v));
      }
    }
    return Schedule::explicit_sequence(std::move(seq), J);
  }
  throw DomainError("schedule kind '" + std::string(kind) + "' is not one of periodic, ruler, file");
}

void write_trace_csv(std::ostream& out, const Trace& t) {
  out << "n,j_n,norm,increment,residual\n";
  for (std::size_t i = 0; i < t.indices.size(); ++i) {
    out << (i + 1) << ',' << t.indices[i] << ',' << format_double(t.iterate_norms[i + 1]) << ','
        << format_double(t.increments[i]) << ',';
    if (!t.residuals.empty()) out << format_double(t.residuals[i]);
    out << '\n';
  }
}

void write_rate_csv(std::ostream& out, const RateCurve& rc) {
  out << "n,measured,predicted,abs_err\n";
  for (std::size_t i = 0; i < rc.measured.size(); ++i) {
    out << (i + 1) << ',' << format_double(rc.measured[i]) << ',' << format_double(rc.predicted[i])
        << ',' << format_double(rc.abs_err[i]) << '\n';
  }
}

void write_residual_csv(std::ostream& out, const std::vector<double>& history) {
  out << "sweep,residual\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << (i + 1) << ',' << format_double(history[i]) << '\n';
  }
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

}  // namespace altproj::io
