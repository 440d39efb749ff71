#include "geosat/instance_gen.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace geosat {

void GenParams::validate() const
{
    if (k == 0) {
        throw std::invalid_argument("clause length k must be at least 1");
    }
    if (k > n) {
        throw std::invalid_argument(
            fmt::format("k = {} exceeds n = {}: a clause needs k distinct variables", k, n));
    }
    if (model == Model::geometric) {
        if (!dimension) {
            throw std::invalid_argument("geometric model requires a dimension");
        }
        if (*dimension == 0) {
            throw std::invalid_argument("dimension must be at least 1");
        }
    } else if (dimension) {
        throw std::invalid_argument("uniform model takes no dimension");
    }
}

namespace {

GenerationMeta meta_of(const GenParams& params)
{
    return GenerationMeta{params.model, params.dimension, params.seed};
}

PointSet sample_points(Rng& rng, std::uint32_t dimension, std::size_t count)
{
    PointSet points{dimension};
    points.reserve(count);
    for (std::size_t i = 0; i < count * dimension; ++i) {
        points.push_coordinate(rng.unit());
    }
    return points;
}

} // namespace

Formula generate_uniform(const GenParams& params)
{
    params.validate();
    if (params.model != Model::uniform) {
        throw std::invalid_argument("generate_uniform called with a geometric model");
    }
    Rng rng{params.seed};

    // perm is restored to the identity after every clause, so each clause is
    // an independent partial shuffle costing O(k).
    std::vector<std::uint32_t> perm(params.n);
    std::iota(perm.begin(), perm.end(), 1u);
    std::vector<std::uint32_t> swaps(params.k);

    std::vector<Clause> clauses;
    clauses.reserve(params.m);
    for (std::uint32_t c = 0; c < params.m; ++c) {
        for (std::uint32_t j = 0; j < params.k; ++j) {
            const auto r = j + static_cast<std::uint32_t>(rng.below(params.n - j));
            std::swap(perm[j], perm[r]);
            swaps[j] = r;
        }
        Clause clause;
        clause.reserve(params.k);
        for (std::uint32_t j = 0; j < params.k; ++j) {
            clause.emplace_back(Variable{perm[j]}, rng.coin());
        }
        for (std::uint32_t j = params.k; j-- > 0;) {
            std::swap(perm[j], perm[swaps[j]]);
        }
        clauses.push_back(std::move(clause));
    }
    return Formula{params.n, params.k, std::move(clauses), meta_of(params)};
}

GeometricInstance generate_geometric(const GenParams& params, BackendPolicy policy)
{
    params.validate();
    if (params.model != Model::geometric) {
        throw std::invalid_argument("generate_geometric called with the uniform model");
    }
    const std::uint32_t d = *params.dimension;
    Rng rng{params.seed};

    Layout layout{sample_points(rng, d, params.n), sample_points(rng, d, params.m)};
    const auto index = SpatialIndex::build(layout.variable_points, policy);

    std::vector<Clause> clauses;
    clauses.reserve(params.m);
    std::vector<Neighbor> nearest;
    for (std::uint32_t c = 0; c < params.m; ++c) {
        index.k_nearest(layout.clause_points[c], params.k, nearest);
        Clause clause;
        clause.reserve(params.k);
        for (const auto& nb : nearest) {
            clause.emplace_back(Variable{nb.label}, false);
        }
        clauses.push_back(std::move(clause));
    }
    for (auto& clause : clauses) {
        for (auto& lit : clause) {
            lit = Literal{lit.var(), rng.coin()};
        }
    }
    return GeometricInstance{Formula{params.n, params.k, std::move(clauses), meta_of(params)},
                             std::move(layout)};
}

Formula generate(const GenParams& params)
{
    if (params.model == Model::uniform) {
        return generate_uniform(params);
    }
    return generate_geometric(params).formula;
}

} // namespace geosat
