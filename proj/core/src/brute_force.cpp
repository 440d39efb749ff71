#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "geosat/solver.hpp"

namespace geosat {

SolverOutcome brute_force_solve(const Formula& formula)
{
    const auto n = formula.num_vars();
    if (n > kBruteForceMaxVars) {
        throw std::invalid_argument(
            fmt::format("brute force refuses n = {} (limit {})", n, kBruteForceMaxVars));
    }
    const auto start = std::chrono::steady_clock::now();

    // Bit (n - i) of the candidate word holds x_i, so counting upwards walks
    // assignments in lexicographic order with x1 most significant.
    struct Masks {
        std::uint32_t positive = 0;
        std::uint32_t negative = 0;
    };
    std::vector<Masks> masks;
    masks.reserve(formula.num_clauses());
    for (const auto& clause : formula.clauses()) {
        Masks m;
        for (const Literal lit : clause) {
            const auto bit = 1u << (n - lit.var().index());
            (lit.negated() ? m.negative : m.positive) |= bit;
        }
        masks.push_back(m);
    }

    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t word = 0; word < total; ++word) {
        const auto bits = static_cast<std::uint32_t>(word);
        bool all = true;
        for (const auto& m : masks) {
            if (((bits & m.positive) | (~bits & m.negative)) == 0) {
                all = false;
                break;
            }
        }
        if (all) {
            Assignment a{n};
            for (std::uint32_t v = 1; v <= n; ++v) {
                a.set(Variable{v}, ((bits >> (n - v)) & 1u) != 0);
            }
            return SolverOutcome{Satisfiable{std::move(a)},
                                 std::chrono::steady_clock::now() - start, {}};
        }
    }
    return SolverOutcome{Unsatisfiable{}, std::chrono::steady_clock::now() - start, {}};
}

} // namespace geosat
