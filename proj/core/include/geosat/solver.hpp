#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <variant>

#include "geosat/drat.hpp"
#include "geosat/formula.hpp"

namespace geosat {

struct Satisfiable {
    Assignment assignment;
    friend bool operator==(const Satisfiable&, const Satisfiable&) = default;
};

struct Unsatisfiable {
    std::optional<DratProof> proof;
    friend bool operator==(const Unsatisfiable&, const Unsatisfiable&) = default;
};

struct Timeout {
    friend bool operator==(const Timeout&, const Timeout&) = default;
};

using Verdict = std::variant<Satisfiable, Unsatisfiable, Timeout>;

struct SolverStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;

    friend bool operator==(const SolverStats&, const SolverStats&) = default;
};

struct SolverOutcome {
    Verdict verdict;
    std::chrono::nanoseconds wall_time{0};
    SolverStats stats;

    [[nodiscard]] bool satisfiable() const noexcept
    {
        return std::holds_alternative<Satisfiable>(verdict);
    }
    [[nodiscard]] bool unsatisfiable() const noexcept
    {
        return std::holds_alternative<Unsatisfiable>(verdict);
    }
    [[nodiscard]] bool timed_out() const noexcept { return std::holds_alternative<Timeout>(verdict); }

    /// The model of a Satisfiable verdict; throws std::bad_variant_access otherwise.
    [[nodiscard]] const Assignment& assignment() const
    {
        return std::get<Satisfiable>(verdict).assignment;
    }
    /// The proof of an Unsatisfiable verdict, if one was recorded.
    [[nodiscard]] const DratProof* proof() const noexcept
    {
        const auto* unsat = std::get_if<Unsatisfiable>(&verdict);
        return unsat && unsat->proof ? &*unsat->proof : nullptr;
    }
};

// CDCL tuning constants. Every default lives here.
struct RestartPolicy {
    std::uint64_t first_interval = 100; // conflicts before the first restart
    double growth = 1.5;                // geometric factor between restarts
};

struct ReductionPolicy {
    double initial_fraction = 1.0 / 3.0; // learned-clause budget as a fraction of m
    std::uint64_t minimum_budget = 2000;
    double growth = 1.1;                 // budget growth after each reduction
    double keep_fraction = 0.5;          // share of reducible clauses kept, by activity
};

struct SolverConfig {
    std::uint64_t seed = 0;
    double random_decision_frequency = 0.0; // seeded random branching, off by default
    double variable_decay = 0.95;
    double clause_decay = 0.999;
    RestartPolicy restarts;
    ReductionPolicy reduction;
    std::optional<std::uint64_t> conflict_limit;
    std::optional<std::chrono::duration<double>> time_limit;
    bool emit_proof = false;
};

/// Conflict-driven clause learning: two watched literals, first-UIP
/// learning with recursive minimisation, activity branching (ties to the lowest
/// index, saved phases starting at false), a geometric restart schedule and
/// activity-based learned clause deletion.
///
/// With emit_proof, every learned clause is recorded as a DRAT addition,
/// every discarded learned clause as a deletion, and refutations end with
/// the empty clause. All additions are RUP. Limits are checked at conflict
/// boundaries and produce a Timeout verdict. Deterministic for a given
/// (formula, config).
[[nodiscard]] SolverOutcome solve_cdcl(const Formula& formula, const SolverConfig& config = {});

/// Implication-graph SCC decision procedure for 2-SAT, linear in n + m.
/// Throws std::domain_error unless formula.clause_length() == 2.
[[nodiscard]] SolverOutcome solve_2sat(const Formula& formula);

inline constexpr std::uint32_t kBruteForceMaxVars = 25;

/// Enumerates assignments in lexicographic order (x1 most significant,
/// false before true) and returns the first model found. Throws
/// std::invalid_argument when n exceeds kBruteForceMaxVars.
[[nodiscard]] SolverOutcome brute_force_solve(const Formula& formula);

} // namespace geosat
