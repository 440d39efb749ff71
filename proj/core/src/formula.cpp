#include "geosat/formula.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace geosat {

Literal Literal::from_dimacs(std::int64_t value)
{
    if (value == 0) {
        throw std::invalid_argument("literal 0 is the clause terminator");
    }
    const auto magnitude = value < 0 ? -value : value;
    if (magnitude > INT32_MAX) {
        throw std::invalid_argument(fmt::format("literal {} out of range", value));
    }
    return Literal{Variable{static_cast<std::uint32_t>(magnitude)}, value < 0};
}

const char* to_string(Model model) noexcept
{
    return model == Model::uniform ? "uniform" : "geometric";
}

Model parse_model(std::string_view text)
{
    if (text == "uniform") {
        return Model::uniform;
    }
    if (text == "geometric") {
        return Model::geometric;
    }
    throw std::invalid_argument(fmt::format("unknown model '{}'", text));
}

namespace {

void validate_clause(const Clause& clause, std::size_t index, std::uint32_t num_vars,
                     std::uint32_t clause_length, std::vector<std::uint32_t>& stamp)
{
    if (clause_length != 0 && clause.size() != clause_length) {
        throw std::invalid_argument(fmt::format("clause {} has {} literals, expected {}", index,
                                                clause.size(), clause_length));
    }
    const auto mark = static_cast<std::uint32_t>(index + 1);
    for (const Literal lit : clause) {
        const auto var = lit.var().index();
        if (var == 0 || var > num_vars) {
            throw std::invalid_argument(
                fmt::format("clause {} mentions variable {} but n = {}", index, var, num_vars));
        }
        if (stamp[var] == mark) {
            throw std::invalid_argument(
                fmt::format("clause {} repeats variable {}", index, var));
        }
        stamp[var] = mark;
    }
}

} // namespace

Formula::Formula(std::uint32_t num_vars, std::uint32_t clause_length, std::vector<Clause> clauses,
                 std::optional<GenerationMeta> meta)
    : num_vars_{num_vars}, clause_length_{clause_length}, clauses_{std::move(clauses)},
      meta_{std::move(meta)}
{
    if (meta_ && meta_->dimension.has_value() != (meta_->model == Model::geometric)) {
        throw std::invalid_argument("generation metadata: dimension must be set iff geometric");
    }
    std::vector<std::uint32_t> stamp(static_cast<std::size_t>(num_vars_) + 1, 0);
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        // The stamp wraps after 2^32 clauses; not a practical concern.
        validate_clause(clauses_[i], i, num_vars_, clause_length_, stamp);
    }
}

Formula Formula::from_clauses(std::uint32_t num_vars, std::vector<Clause> clauses,
                              std::optional<GenerationMeta> meta)
{
    std::uint32_t k = 0;
    if (!clauses.empty()) {
        const auto first = clauses.front().size();
        const bool uniform_length = std::all_of(clauses.begin(), clauses.end(),
                                                [&](const Clause& c) { return c.size() == first; });
        if (uniform_length) {
            k = static_cast<std::uint32_t>(first);
        }
    }
    return Formula{num_vars, k, std::move(clauses), std::move(meta)};
}

double density(const Formula& formula)
{
    if (formula.num_vars() == 0) {
        throw std::domain_error("density is undefined for n = 0");
    }
    return static_cast<double>(formula.num_clauses()) / static_cast<double>(formula.num_vars());
}

bool evaluate(const Formula& formula, const Assignment& assignment)
{
    if (assignment.num_vars() != formula.num_vars()) {
        throw std::domain_error(fmt::format("assignment covers {} variables, formula has {}",
                                            assignment.num_vars(), formula.num_vars()));
    }
    return std::all_of(formula.clauses().begin(), formula.clauses().end(), [&](const Clause& c) {
        return std::any_of(c.begin(), c.end(),
                           [&](Literal lit) { return assignment.satisfies(lit); });
    });
}

} // namespace geosat
