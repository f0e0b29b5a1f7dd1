#pragma once
//
// Text formats shared by the CLI and tests. Malformed input raises ParseError
// naming the file and the 1-based line.
//

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "altproj/analysis.hpp"
#include "altproj/iteration.hpp"
#include "altproj/kaczmarz.hpp"
#include "altproj/schedule.hpp"

namespace altproj::io {

// %.17g
std::string format_double(double x);

// Comma-separated decimals, e.g. "1,2.5,-3e-4". `origin` names the source in errors.
Vector parse_vector(std::string_view text, const std::string& origin = "<argument>",
                    std::size_t line = 1);

// '#' comments, one basis vector per line, orthonormalized with tol 1e-10.
Subspace read_subspace(const std::string& path);
Subspace parse_subspace(std::istream& in, const std::string& origin);

// Sparse: header "n J", then J rows "c k idx1 val1 ... idxk valk" (0-based idx).
// Dense: each line "a_1,...,a_n,c".
LinearSystem read_system(const std::string& path, bool dense);
LinearSystem parse_system(std::istream& in, const std::string& origin, bool dense);

// "periodic:1,2,3" | "ruler:J" | "file:PATH". J is the number of subspaces
// available; indices above it are rejected.
Schedule parse_schedule(std::string_view spec, int J);

// n,j_n,norm,increment,residual
void write_trace_csv(std::ostream& out, const Trace& t);

// n,measured,predicted,abs_err
void write_rate_csv(std::ostream& out, const RateCurve& rc);

// sweep,residual
void write_residual_csv(std::ostream& out, const std::vector<double>& history);

// One coordinate per line.
void write_vector(std::ostream& out, const Vector& v);

}  // namespace altproj::io
