#include <algorithm>
#include <vector>

#include "geosat/propagate.hpp"
#include "geosat/proof.hpp"

namespace geosat {

ProofMetrics compute_proof_metrics(const DratProof& proof)
{
    ProofMetrics m;
    for (const auto& step : proof.steps) {
        const auto length = static_cast<std::uint64_t>(step.literals.size());
        ++m.total_clauses;
        m.total_literals += length;
        if (step.kind == StepKind::add) {
            ++m.additions;
            m.literals_in_additions += length;
        } else {
            ++m.deletions;
            m.literals_in_deletions += length;
        }
        m.max_clause_length = std::max(m.max_clause_length, length);
    }
    return m;
}

std::string_view to_string(CheckFailure failure) noexcept
{
    switch (failure) {
    case CheckFailure::not_rup:
        return "not-RUP";
    case CheckFailure::no_refutation:
        return "no-refutation";
    case CheckFailure::malformed_delete:
        return "malformed-delete";
    }
    return "unknown";
}

CheckReport check_rup_proof(const Formula& formula, const DratProof& proof,
                            const CheckOptions& options)
{
    UnitPropagator db{formula.num_vars()};
    for (const auto& clause : formula.clauses()) {
        db.add_clause(clause);
    }

    CheckReport report;
    std::vector<Literal> negated;
    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
        const auto& step = proof.steps[i];
        if (step.kind == StepKind::remove) {
            if (!db.remove_clause(step.literals)) {
                if (!options.lenient_deletions) {
                    report.failing_step = i;
                    report.reason = CheckFailure::malformed_delete;
                    return report;
                }
                ++report.ignored_deletions;
            }
            continue;
        }
        negated.clear();
        for (const Literal lit : step.literals) {
            negated.push_back(~lit);
        }
        if (!db.propagates_to_conflict(negated)) {
            report.failing_step = i;
            report.reason = CheckFailure::not_rup;
            return report;
        }
        if (step.literals.empty()) {
            report.valid = true;
            return report;
        }
        db.add_clause(step.literals);
    }

    if (db.propagates_to_conflict({})) {
        report.valid = true;
    } else {
        report.reason = CheckFailure::no_refutation;
    }
    return report;
}

} // namespace geosat
