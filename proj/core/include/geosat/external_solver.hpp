#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geosat/drat.hpp"
#include "geosat/records.hpp"

namespace geosat {

/// How to invoke a third-party solver. Each argument may contain the
/// placeholders `{instance}` and `{proof}`; arguments mentioning `{proof}`
/// are dropped when no proof is requested.
struct ExternalSolverSpec {
    std::filesystem::path executable;
    std::vector<std::string> arguments{"{instance}", "{proof}"};
};

/// Result of one external solver process.
struct ExternalRun {
    RunVerdict verdict = RunVerdict::error;
    std::chrono::microseconds wall_time{0};
    std::optional<DratProof> proof;
    std::optional<int> exit_code; // unset when killed or never started
    std::string reason;           // why the verdict is ERROR, or a proof warning
};

/// Runs the solver on a DIMACS file following SAT-competition conventions:
/// exit code 10 or an `s SATISFIABLE` line means SAT, exit code 20 or
/// `s UNSATISFIABLE` means UNSAT. The process group is killed once
/// `timeout` elapses (verdict TIMEOUT). Wall time spans the whole process
/// lifetime. When the verdict is UNSAT and `proof_file` exists afterwards,
/// it is parsed as textual DRAT.
[[nodiscard]] ExternalRun run_external_solver(const ExternalSolverSpec& solver,
                                              const std::filesystem::path& instance_file,
                                              const std::optional<std::filesystem::path>& proof_file,
                                              std::chrono::duration<double> timeout);

} // namespace geosat
