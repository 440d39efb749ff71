#include "geosat/propagate.hpp"

#include <algorithm>

namespace geosat {

std::optional<bool> PartialAssignment::value(Variable v) const
{
    const auto i = v.index() - 1;
    if (i >= values_.size() || values_[i] == kUnassigned) {
        return std::nullopt;
    }
    return values_[i] != 0;
}

std::optional<bool> PartialAssignment::value(Literal lit) const
{
    const auto v = value(lit.var());
    if (!v) {
        return std::nullopt;
    }
    return *v != lit.negated();
}

void PartialAssignment::assign(Literal lit)
{
    const auto i = lit.var().index() - 1;
    if (i >= values_.size()) {
        values_.resize(i + 1, kUnassigned);
    }
    values_[i] = lit.negated() ? 0 : 1;
}

void PartialAssignment::unassign(Variable v)
{
    const auto i = v.index() - 1;
    if (i < values_.size()) {
        values_[i] = kUnassigned;
    }
}

std::size_t PartialAssignment::assigned_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](std::int8_t v) { return v != kUnassigned; }));
}

PropagationResult unit_propagate(std::span<const Clause> clauses, PartialAssignment assignment)
{
    UnitPropagator db{assignment.num_vars()};
    for (const auto& clause : clauses) {
        db.add_clause(clause);
    }
    return db.propagate(assignment);
}

UnitPropagator::UnitPropagator(std::uint32_t num_vars)
{
    ensure_var(num_vars);
}

void UnitPropagator::ensure_var(std::uint32_t var)
{
    if (var > num_vars_) {
        num_vars_ = var;
        values_.resize(var, -1);
        watches_.resize(2 * static_cast<std::size_t>(var));
    }
}

std::int8_t UnitPropagator::lit_value(std::uint32_t code) const noexcept
{
    const std::int8_t v = values_[code >> 1];
    return v < 0 ? v : static_cast<std::int8_t>(v ^ static_cast<std::int8_t>(code & 1u));
}

std::vector<std::uint32_t> UnitPropagator::normalized(std::span<const Literal> clause,
                                                      bool& tautology) const
{
    std::vector<std::uint32_t> lits;
    lits.reserve(clause.size());
    for (const Literal lit : clause) {
        lits.push_back(lit.code());
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    tautology = false;
    for (std::size_t i = 1; i < lits.size(); ++i) {
        if ((lits[i] ^ 1u) == lits[i - 1]) {
            tautology = true;
        }
    }
    return lits;
}

std::uint64_t UnitPropagator::key_of(const std::vector<std::uint32_t>& sorted_lits)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto code : sorted_lits) {
        h = (h ^ code) * 0x100000001b3ULL;
    }
    return h ^ sorted_lits.size();
}

void UnitPropagator::add_clause(std::span<const Literal> clause)
{
    bool tautology = false;
    auto lits = normalized(clause, tautology);
    for (const auto code : lits) {
        ensure_var((code >> 1) + 1);
    }
    const auto ref = static_cast<ClauseRef>(clauses_.size());
    by_content_.emplace(key_of(lits), ref);
    ++live_clauses_;
    if (!tautology) {
        if (lits.empty()) {
            ++empty_clauses_;
        } else if (lits.size() == 1) {
            units_.push_back(ref);
        } else {
            watches_[lits[0]].push_back(ref);
            watches_[lits[1]].push_back(ref);
        }
    }
    clauses_.push_back(StoredClause{std::move(lits), true});
}

bool UnitPropagator::remove_clause(std::span<const Literal> clause)
{
    bool tautology = false;
    const auto lits = normalized(clause, tautology);
    const auto [first, last] = by_content_.equal_range(key_of(lits));
    for (auto it = first; it != last; ++it) {
        StoredClause& stored = clauses_[it->second];
        auto sorted = stored.lits;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != lits) {
            continue;
        }
        const ClauseRef ref = it->second;
        by_content_.erase(it);
        stored.alive = false; // watch lists drop dead clauses lazily
        --live_clauses_;
        if (!tautology) {
            if (lits.empty()) {
                --empty_clauses_;
            } else if (lits.size() == 1) {
                units_.erase(std::find(units_.begin(), units_.end(), ref));
            }
        }
        return true;
    }
    return false;
}

bool UnitPropagator::enqueue(std::uint32_t code)
{
    const auto v = lit_value(code);
    if (v == 1) {
        return true;
    }
    if (v == 0) {
        return false;
    }
    values_[code >> 1] = static_cast<std::int8_t>((code & 1u) ^ 1u);
    trail_.push_back(code);
    return true;
}

bool UnitPropagator::run(std::size_t head)
{
    while (head < trail_.size()) {
        const std::uint32_t false_lit = trail_[head++] ^ 1u;
        auto& ws = watches_[false_lit];
        std::size_t keep = 0;
        std::size_t i = 0;
        bool conflict = false;
        for (; i < ws.size(); ++i) {
            const ClauseRef ref = ws[i];
            StoredClause& c = clauses_[ref];
            if (!c.alive) {
                continue;
            }
            auto& lits = c.lits;
            if (lits[0] == false_lit) {
                std::swap(lits[0], lits[1]);
            }
            if (lit_value(lits[0]) == 1) {
                ws[keep++] = ref;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < lits.size(); ++k) {
                if (lit_value(lits[k]) != 0) {
                    std::swap(lits[1], lits[k]);
                    watches_[lits[1]].push_back(ref);
                    moved = true;
                    break;
                }
            }
            if (moved) {
                continue;
            }
            ws[keep++] = ref;
            if (!enqueue(lits[0])) {
                conflict = true;
                ++i;
                break;
            }
        }
        for (; i < ws.size(); ++i) {
            ws[keep++] = ws[i];
        }
        ws.resize(keep);
        if (conflict) {
            return false;
        }
    }
    return true;
}

void UnitPropagator::reset_trail()
{
    for (const auto code : trail_) {
        values_[code >> 1] = -1;
    }
    trail_.clear();
}

bool UnitPropagator::propagates_to_conflict(std::span<const Literal> assumptions)
{
    for (const Literal lit : assumptions) {
        ensure_var(lit.var().index());
    }
    bool ok = empty_clauses_ == 0;
    for (std::size_t u = 0; ok && u < units_.size(); ++u) {
        ok = enqueue(clauses_[units_[u]].lits[0]);
    }
    for (std::size_t a = 0; ok && a < assumptions.size(); ++a) {
        ok = enqueue(assumptions[a].code());
    }
    ok = ok && run(0);
    reset_trail();
    return !ok;
}

PropagationResult UnitPropagator::propagate(const PartialAssignment& seed)
{
    ensure_var(seed.num_vars());
    bool ok = empty_clauses_ == 0;
    for (std::uint32_t v = 1; ok && v <= seed.num_vars(); ++v) {
        if (const auto value = seed.value(Variable{v})) {
            ok = enqueue(Literal{Variable{v}, !*value}.code());
        }
    }
    for (std::size_t u = 0; ok && u < units_.size(); ++u) {
        ok = enqueue(clauses_[units_[u]].lits[0]);
    }
    ok = ok && run(0);
    if (!ok) {
        reset_trail();
        return PropagationConflict{};
    }
    PartialAssignment result{std::max(num_vars_, seed.num_vars())};
    for (const auto code : trail_) {
        result.assign(Literal::from_code(code));
    }
    reset_trail();
    return result;
}

} // namespace geosat
