#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosat/external_solver.hpp"
#include "geosat/formula.hpp"
#include "geosat/records.hpp"

namespace geosat {

/// Which solver a grid runs.
struct SolverChoice {
    enum class Kind { cdcl, twosat, external };

    Kind kind = Kind::cdcl;
    ExternalSolverSpec external; // Kind::external only

    /// Accepts `cdcl`, `twosat` (or `2sat`) and `external:<path>`. Throws
    /// std::invalid_argument otherwise.
    [[nodiscard]] static SolverChoice parse(std::string_view text);
    /// Identifier written to RunRecord::solver_id.
    [[nodiscard]] std::string id() const;
};

inline constexpr std::chrono::seconds kDefaultTimeout{60};

/// Cartesian experiment grid. Clause counts come either from
/// `clause_counts` or from `densities` (m = round_half_up(density * n)),
/// never both. A nullopt dimension stands for the uniform model.
struct ExperimentGrid {
    std::vector<std::uint32_t> ks;
    std::vector<std::uint32_t> ns;
    std::vector<std::uint32_t> clause_counts;
    std::vector<double> densities;
    std::vector<std::optional<std::uint32_t>> dimensions{std::nullopt};
    std::uint32_t instances_per_cell = 1;
    std::uint64_t master_seed = 0;
    SolverChoice solver;
    std::chrono::duration<double> timeout = kDefaultTimeout;
    bool emit_proof = false;
    bool check_proofs = true; // only meaningful with emit_proof

    /// Throws std::invalid_argument on an empty axis, both or neither of
    /// clause_counts/densities, a negative or non-finite density, a
    /// non-positive timeout or instances_per_cell == 0.
    void validate() const;
};

/// round_half_up(density * n). Throws std::domain_error on a negative or
/// non-finite product or one beyond 2^32 - 1.
[[nodiscard]] std::uint32_t clause_count_for_density(double density, std::uint32_t n);

/// One (model, k, n, m, dimension) combination.
struct GridCell {
    Model model = Model::uniform;
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::optional<std::uint32_t> dimension;

    friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// Cells in run order: dimension list order, then k, n, m as listed.
/// Clause counts that coincide after rounding are visited once.
[[nodiscard]] std::vector<GridCell> expand_cells(const ExperimentGrid& grid);

/// Seed of a cell, a pure function of the master seed and the cell
/// parameters, so a cell's instances do not depend on what else the grid
/// contains.
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t master_seed, const GridCell& cell);

/// derive_instance_seed(cell_seed(master, cell), index).
[[nodiscard]] std::uint64_t instance_seed(std::uint64_t master_seed, const GridCell& cell,
                                          std::uint32_t index);

/// Generates, solves and (optionally) verifies one instance. Never throws
/// for bad cell parameters: those yield an ERROR record with a note.
[[nodiscard]] RunRecord run_instance(const ExperimentGrid& grid, const GridCell& cell,
                                     std::uint32_t index);

/// Called after each finished instance with (finished, total). Invoked
/// from worker threads, one call at a time.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs every (cell, index) task on `workers` threads. The result is
/// ordered by (cell, index) and, apart from wall times, independent of the
/// worker count. Throws std::invalid_argument on an invalid grid or zero
/// workers.
[[nodiscard]] std::vector<RunRecord> run_experiment(const ExperimentGrid& grid, unsigned workers,
                                                    const ProgressFn& progress = {});

} // namespace geosat
