#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "geosat/solver.hpp"

namespace geosat {

namespace {

// Implication graph in CSR form over literal codes: clause (a v b) yields
// edges ~a -> b and ~b -> a.
struct ImplicationGraph {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> targets;
};

ImplicationGraph build_graph(const Formula& formula)
{
    const std::size_t nodes = 2 * static_cast<std::size_t>(formula.num_vars());
    ImplicationGraph g;
    g.offsets.assign(nodes + 1, 0);
    for (const auto& c : formula.clauses()) {
        ++g.offsets[(c[0].code() ^ 1u) + 1];
        ++g.offsets[(c[1].code() ^ 1u) + 1];
    }
    for (std::size_t i = 1; i <= nodes; ++i) {
        g.offsets[i] += g.offsets[i - 1];
    }
    g.targets.resize(g.offsets[nodes]);
    std::vector<std::uint32_t> fill(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto& c : formula.clauses()) {
        const auto a = c[0].code();
        const auto b = c[1].code();
        g.targets[fill[a ^ 1u]++] = b;
        g.targets[fill[b ^ 1u]++] = a;
    }
    return g;
}

// Iterative Tarjan. Components are numbered in reverse topological order
// of the condensation: an edge u -> v implies component(u) >= component(v).
std::vector<std::uint32_t> strongly_connected_components(const ImplicationGraph& g)
{
    const auto nodes = static_cast<std::uint32_t>(g.offsets.size() - 1);
    constexpr std::uint32_t kUnvisited = UINT32_MAX;
    std::vector<std::uint32_t> index(nodes, kUnvisited);
    std::vector<std::uint32_t> low(nodes, 0);
    std::vector<std::uint32_t> component(nodes, kUnvisited);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> frames; // (node, next edge)
    std::uint32_t counter = 0;
    std::uint32_t components = 0;

    for (std::uint32_t root = 0; root < nodes; ++root) {
        if (index[root] != kUnvisited) {
            continue;
        }
        frames.emplace_back(root, g.offsets[root]);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        while (!frames.empty()) {
            auto& [node, edge] = frames.back();
            if (edge < g.offsets[node + 1]) {
                const auto next = g.targets[edge++];
                if (index[next] == kUnvisited) {
                    index[next] = low[next] = counter++;
                    stack.push_back(next);
                    frames.emplace_back(next, g.offsets[next]);
                } else if (component[next] == kUnvisited) {
                    low[node] = std::min(low[node], index[next]);
                }
                continue;
            }
            const auto done = node;
            frames.pop_back();
            if (!frames.empty()) {
                const auto parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                std::uint32_t member = 0;
                do {
                    member = stack.back();
                    stack.pop_back();
                    component[member] = components;
                } while (member != done);
                ++components;
            }
        }
    }
    return component;
}

} // namespace

SolverOutcome solve_2sat(const Formula& formula)
{
    if (formula.clause_length() != 2) {
        throw std::domain_error(
            fmt::format("2-SAT solver needs k = 2, got k = {}", formula.clause_length()));
    }
    const auto start = std::chrono::steady_clock::now();
    const auto component = strongly_connected_components(build_graph(formula));

    Assignment assignment{formula.num_vars()};
    bool satisfiable = true;
    for (std::uint32_t v = 0; v < formula.num_vars(); ++v) {
        const auto pos = component[2 * v];
        const auto neg = component[2 * v + 1];
        if (pos == neg) {
            satisfiable = false;
            break;
        }
        // x is true iff x comes later than ~x in topological order.
        assignment.set(Variable{v + 1}, pos < neg);
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    if (!satisfiable) {
        return SolverOutcome{Unsatisfiable{}, elapsed, {}};
    }
    return SolverOutcome{Satisfiable{std::move(assignment)}, elapsed, {}};
}

} // namespace geosat
