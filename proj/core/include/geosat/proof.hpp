#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "geosat/drat.hpp"
#include "geosat/formula.hpp"

namespace geosat {

/// Size measures of a DRAT proof. The empty clause counts as a step of
/// length zero.
struct ProofMetrics {
    std::uint64_t total_clauses = 0;
    std::uint64_t additions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t total_literals = 0;
    std::uint64_t literals_in_additions = 0;
    std::uint64_t literals_in_deletions = 0;
    std::uint64_t max_clause_length = 0;

    friend bool operator==(const ProofMetrics&, const ProofMetrics&) = default;
};

[[nodiscard]] ProofMetrics compute_proof_metrics(const DratProof& proof);

enum class CheckFailure {
    not_rup,          // an addition is not implied by unit propagation
    no_refutation,    // all steps pass but nothing refutes the formula
    malformed_delete, // a deletion names a clause that is not present
};

[[nodiscard]] std::string_view to_string(CheckFailure failure) noexcept;

struct CheckReport {
    bool valid = false;
    std::optional<std::size_t> failing_step; // 0-based, into proof.steps
    std::optional<CheckFailure> reason;
    std::size_t ignored_deletions = 0; // lenient mode only
};

struct CheckOptions {
    /// Ignore deletions of absent clauses (counted in the report) instead of
    /// rejecting the proof. Mainstream DRAT checkers behave this way.
    bool lenient_deletions = false;
};

/// Forward RUP check. Each added clause must yield a unit-propagation
/// conflict once its literals are asserted false against the current
/// clause set; it then joins the set. Deletions remove one clause with the
/// same literal multiset. The proof is valid once an added empty clause
/// passes (later steps are ignored), or if after the last step unit
/// propagation alone conflicts. RAT-only additions are rejected as not_rup.
[[nodiscard]] CheckReport check_rup_proof(const Formula& formula, const DratProof& proof,
                                          const CheckOptions& options = {});

} // namespace geosat
