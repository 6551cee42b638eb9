#pragma once

#include <string>
#include <string_view>

#include "qsplit/qubo.hpp"

namespace qsplit {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// QUBO text format:
///   # comment
///   p <n>
///   o <offset>          (optional, omitted when 0)
///   <i> <j> <coeff>     (0-based, i <= j)
/// Entries are emitted sorted by (i, j); parse(serialize(q)) == q.
std::string serialize_qubo_file(const QuboMatrix& q);

/// Parse the format above. Throws ParseError (with 1-based line number) on a
/// malformed line, i > j, an index >= n, or a non-finite number.
QuboMatrix parse_qubo_file(std::string_view text);

}  // namespace qsplit
