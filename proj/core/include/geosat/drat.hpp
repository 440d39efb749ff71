#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "geosat/errors.hpp"
#include "geosat/formula.hpp"

namespace geosat {

enum class StepKind { add, remove };

struct DratStep {
    StepKind kind = StepKind::add;
    Clause literals; // empty for the empty clause

    friend bool operator==(const DratStep&, const DratStep&) = default;
};

struct DratProof {
    std::vector<DratStep> steps;

    friend bool operator==(const DratProof&, const DratProof&) = default;
};

/// Textual DRAT: `l1 l2 ... 0` per addition, `d l1 l2 ... 0` per deletion,
/// and `0` for the empty clause.
void write_drat(const DratProof& proof, std::ostream& out);

/// Reads textual DRAT. Lines starting with `c` are skipped; a step may
/// span lines. Throws ParseError on stray tokens or a missing terminator.
[[nodiscard]] DratProof read_drat(std::istream& in);

void write_drat_file(const DratProof& proof, const std::filesystem::path& path);
[[nodiscard]] DratProof read_drat_file(const std::filesystem::path& path);

} // namespace geosat
