#pragma once

#include <filesystem>
#include <iosfwd>

#include "geosat/errors.hpp"
#include "geosat/formula.hpp"

namespace geosat {

/// Writes `formula` as DIMACS CNF with LF line endings: an optional
/// `c geosat ...` metadata comment, the `p cnf <n> <m>` header, then one
/// zero-terminated line per clause in stored order. Throws
/// std::runtime_error if the stream fails.
void write_dimacs(const Formula& formula, std::ostream& out);

/// Parses DIMACS CNF. Comment lines are skipped (a `c geosat` metadata
/// comment is decoded), clauses may span lines, and a legacy `%` line ends
/// the clause section. Throws ParseError on a missing header, a literal
/// outside 1..n, a repeated variable in a clause, a clause count that
/// disagrees with the header, a non-integer token, or a missing terminator.
[[nodiscard]] Formula read_dimacs(std::istream& in);

void write_dimacs_file(const Formula& formula, const std::filesystem::path& path);
[[nodiscard]] Formula read_dimacs_file(const std::filesystem::path& path);

} // namespace geosat
