#pragma once

#include <cstdint>
#include <optional>

#include "geosat/formula.hpp"
#include "geosat/rng.hpp"
#include "geosat/spatial_index.hpp"
#include "geosat/torus.hpp"

namespace geosat {

struct GenParams {
    Model model = Model::uniform;
    std::uint32_t k = 3;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::optional<std::uint32_t> dimension; // geometric only
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on k = 0, k > n, or a dimension that is
    /// missing, zero, or present for the uniform model.
    void validate() const;
};

/// Geometric ground truth: variable i sits at variable_points[i - 1],
/// clause j at clause_points[j].
struct Layout {
    PointSet variable_points;
    PointSet clause_points;

    friend bool operator==(const Layout&, const Layout&) = default;
};

struct GeometricInstance {
    Formula formula;
    Layout layout;
};

/// Uniform random k-SAT. Per clause, in clause order: a uniform k-subset of
/// 1..n by partial Fisher-Yates (literals kept in draw order), then one
/// polarity bit per literal.
[[nodiscard]] Formula generate_uniform(const GenParams& params);

/// Geometric random k-SAT on the d-torus. Draw order: all n variable
/// points, then all m clause points (each point's coordinates in axis
/// order), then the polarity bits clause by clause. Clause j holds the k
/// variables nearest to its point, nearest first. Duplicate clauses are kept.
[[nodiscard]] GeometricInstance generate_geometric(const GenParams& params,
                                                   BackendPolicy policy = BackendPolicy::automatic);

/// Dispatches on params.model and drops the layout.
[[nodiscard]] Formula generate(const GenParams& params);

} // namespace geosat
