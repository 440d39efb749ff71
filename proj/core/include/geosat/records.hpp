#pragma once

#include <chrono>
#include <filesystem>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geosat/errors.hpp"
#include "geosat/formula.hpp"
#include "geosat/proof.hpp"

namespace geosat {

/// ERROR marks a run that produced no verdict (bad cell parameters, a
/// crashed or unrecognised external solver). Like TIMEOUT it never enters a
/// satisfiable ratio.
enum class RunVerdict { sat, unsat, timeout, error };

[[nodiscard]] std::string_view to_string(RunVerdict verdict) noexcept;
[[nodiscard]] std::optional<RunVerdict> parse_verdict(std::string_view text) noexcept;

/// One benchmarked instance.
struct RunRecord {
    Model model = Model::uniform;
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::optional<std::uint32_t> dimension;
    std::uint64_t instance_seed = 0;
    std::string solver_id;
    RunVerdict verdict = RunVerdict::error;
    std::chrono::microseconds wall_time{0};
    std::optional<ProofMetrics> proof_metrics; // UNSAT with a proof only
    std::optional<bool> proof_checked;
    std::string note; // diagnostic text; not part of the CSV

    [[nodiscard]] double density() const noexcept
    {
        return n == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(n);
    }

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline constexpr std::string_view kRecordCsvHeader =
    "model,k,n,m,density,dimension,instance_seed,solver_id,verdict,wall_time_s,"
    "proof_total_clauses,proof_additions,proof_deletions,proof_total_literals,"
    "proof_literals_additions,proof_literals_deletions,proof_max_clause_length,proof_checked";

/// Writes the header row and one row per record (UTF-8, LF). Durations are
/// seconds with six decimals; absent values are empty fields.
void persist_records(std::span<const RunRecord> records, std::ostream& out);

/// Inverse of persist_records. Throws ParseError with the 1-based row
/// number (the header is row 1) on a malformed row.
[[nodiscard]] std::vector<RunRecord> load_records(std::istream& in);

void persist_records_file(std::span<const RunRecord> records, const std::filesystem::path& path);
[[nodiscard]] std::vector<RunRecord> load_records_file(const std::filesystem::path& path);

} // namespace geosat
