#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "geosat/formula.hpp"

namespace geosat {

/// Assignment over variables 1..n where each variable may be unassigned.
class PartialAssignment {
public:
    PartialAssignment() = default;
    explicit PartialAssignment(std::uint32_t num_vars) : values_(num_vars, kUnassigned) {}

    [[nodiscard]] std::uint32_t num_vars() const noexcept
    {
        return static_cast<std::uint32_t>(values_.size());
    }
    [[nodiscard]] std::optional<bool> value(Variable v) const;
    /// Truth value of `lit` under the assignment, if its variable is set.
    [[nodiscard]] std::optional<bool> value(Literal lit) const;
    /// Makes `lit` true. Grows the assignment if the variable is beyond n.
    void assign(Literal lit);
    void unassign(Variable v);
    [[nodiscard]] std::size_t assigned_count() const noexcept;

    friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

private:
    static constexpr std::int8_t kUnassigned = -1;
    std::vector<std::int8_t> values_;
};

struct PropagationConflict {
    friend bool operator==(const PropagationConflict&, const PropagationConflict&) = default;
};

/// NoConflict carries the extended assignment.
using PropagationResult = std::variant<PartialAssignment, PropagationConflict>;

/// Unit propagation to fixpoint: while some clause has all literals false
/// but one unassigned, make that literal true. Returns the conflict as soon
/// as a clause has every literal false. Clauses are visited in the given
/// order, so the result is deterministic.
[[nodiscard]] PropagationResult unit_propagate(std::span<const Clause> clauses,
                                               PartialAssignment assignment);

/// Incremental watched-literal clause database with the same propagation
/// semantics as unit_propagate. Clauses may be added and removed (removal
/// matches by literal multiset); each query propagates from an empty
/// assignment, so the database carries no assignment state between calls.
class UnitPropagator {
public:
    explicit UnitPropagator(std::uint32_t num_vars = 0);

    /// Adds a clause. Repeated literals are collapsed; tautologies are kept
    /// but never propagate.
    void add_clause(std::span<const Literal> clause);

    /// Removes one clause equal to `clause` as a literal multiset (after the
    /// same collapsing as add_clause). Returns false if none is present.
    bool remove_clause(std::span<const Literal> clause);

    /// Makes every literal of `assumptions` true on top of the unit clauses
    /// and propagates. True iff a conflict arises; for a clause C, passing
    /// the negations of C's literals decides whether C is RUP.
    [[nodiscard]] bool propagates_to_conflict(std::span<const Literal> assumptions);

    /// Like propagates_to_conflict but returns the fixpoint assignment.
    [[nodiscard]] PropagationResult propagate(const PartialAssignment& seed);

    [[nodiscard]] std::size_t size() const noexcept { return live_clauses_; }

private:
    using ClauseRef = std::uint32_t;

    struct StoredClause {
        std::vector<std::uint32_t> lits; // literal codes, watched pair first
        bool alive = true;
    };

    void ensure_var(std::uint32_t var);
    [[nodiscard]] std::int8_t lit_value(std::uint32_t code) const noexcept;
    /// Returns false on an immediate conflict.
    bool enqueue(std::uint32_t code);
    /// Processes the trail from `head`; false on conflict.
    bool run(std::size_t head);
    void reset_trail();
    std::vector<std::uint32_t> normalized(std::span<const Literal> clause, bool& tautology) const;
    static std::uint64_t key_of(const std::vector<std::uint32_t>& sorted_lits);

    std::uint32_t num_vars_ = 0;
    std::vector<StoredClause> clauses_;
    std::vector<std::vector<ClauseRef>> watches_; // by literal code: clauses watching it
    std::vector<ClauseRef> units_;
    std::size_t empty_clauses_ = 0;
    std::size_t live_clauses_ = 0;
    std::unordered_multimap<std::uint64_t, ClauseRef> by_content_;
    std::vector<std::int8_t> values_; // by variable index - 1
    std::vector<std::uint32_t> trail_;
};

} // namespace geosat
