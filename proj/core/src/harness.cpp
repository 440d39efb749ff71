#include "geosat/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "geosat/dimacs.hpp"
#include "geosat/instance_gen.hpp"
#include "geosat/proof.hpp"
#include "geosat/rng.hpp"
#include "geosat/solver.hpp"

namespace geosat {

SolverChoice SolverChoice::parse(std::string_view text)
{
    SolverChoice choice;
    if (text == "cdcl") {
        choice.kind = Kind::cdcl;
    } else if (text == "twosat" || text == "2sat") {
        choice.kind = Kind::twosat;
    } else if (text.starts_with("external:") && text.size() > 9) {
        choice.kind = Kind::external;
        choice.external.executable = std::string{text.substr(9)};
    } else {
        throw std::invalid_argument(
            fmt::format("unknown solver '{}' (expected cdcl, twosat or external:<path>)", text));
    }
    return choice;
}

std::string SolverChoice::id() const
{
    switch (kind) {
    case Kind::cdcl:
        return "cdcl";
    case Kind::twosat:
        return "twosat";
    case Kind::external:
        return "external:" + external.executable.string();
    }
    return "unknown";
}

void ExperimentGrid::validate() const
{
    if (ks.empty() || ns.empty() || dimensions.empty()) {
        throw std::invalid_argument("grid needs at least one k, n and dimension");
    }
    if (clause_counts.empty() == densities.empty()) {
        throw std::invalid_argument("grid needs clause counts or densities, not both");
    }
    for (const double d : densities) {
        if (!std::isfinite(d) || d < 0.0) {
            throw std::invalid_argument(fmt::format("bad density {}", d));
        }
    }
    if (instances_per_cell == 0) {
        throw std::invalid_argument("instances_per_cell must be at least 1");
    }
    if (!(timeout.count() > 0.0)) {
        throw std::invalid_argument("timeout must be positive");
    }
    if (solver.kind == SolverChoice::Kind::external && solver.external.executable.empty()) {
        throw std::invalid_argument("external solver needs an executable path");
    }
}

std::uint32_t clause_count_for_density(double density, std::uint32_t n)
{
    const double product = density * static_cast<double>(n);
    if (!std::isfinite(product) || product < 0.0) {
        throw std::domain_error(fmt::format("bad density {}", density));
    }
    const double rounded = std::floor(product + 0.5);
    if (rounded > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        throw std::domain_error("clause count out of range");
    }
    return static_cast<std::uint32_t>(rounded);
}

std::vector<GridCell> expand_cells(const ExperimentGrid& grid)
{
    std::vector<GridCell> cells;
    for (const auto& dim : grid.dimensions) {
        for (const auto k : grid.ks) {
            for (const auto n : grid.ns) {
                std::vector<std::uint32_t> ms = grid.clause_counts;
                if (ms.empty()) {
                    for (const double d : grid.densities) {
                        ms.push_back(clause_count_for_density(d, n));
                    }
                }
                std::vector<std::uint32_t> seen;
                for (const auto m : ms) {
                    if (std::find(seen.begin(), seen.end(), m) != seen.end()) {
                        continue;
                    }
                    seen.push_back(m);
                    cells.push_back(GridCell{dim ? Model::geometric : Model::uniform, k, n, m, dim});
                }
            }
        }
    }
    return cells;
}

std::uint64_t cell_seed(std::uint64_t master_seed, const GridCell& cell)
{
    // Geometric dimensions are >= 1, so 0 is free to tag the uniform model.
    std::uint64_t s = master_seed;
    for (const std::uint64_t part : {std::uint64_t{cell.k}, std::uint64_t{cell.n}, std::uint64_t{cell.m},
                                     std::uint64_t{cell.dimension.value_or(0)}}) {
        s = derive_instance_seed(s, part);
    }
    return s;
}

std::uint64_t instance_seed(std::uint64_t master_seed, const GridCell& cell, std::uint32_t index)
{
    return derive_instance_seed(cell_seed(master_seed, cell), index);
}

namespace {

// Throws std::invalid_argument when the cell cannot be run at all.
void check_cell(const ExperimentGrid& grid, const GridCell& cell)
{
    GenParams params{cell.model, cell.k, cell.n, cell.m, cell.dimension, 0};
    params.validate();
    if (grid.solver.kind == SolverChoice::Kind::twosat && cell.k != 2) {
        throw std::invalid_argument(fmt::format("the 2-SAT solver needs k = 2, got k = {}", cell.k));
    }
}

RunRecord blank_record(const ExperimentGrid& grid, const GridCell& cell, std::uint32_t index)
{
    RunRecord r;
    r.model = cell.model;
    r.k = cell.k;
    r.n = cell.n;
    r.m = cell.m;
    r.dimension = cell.dimension;
    r.instance_seed = instance_seed(grid.master_seed, cell, index);
    r.solver_id = grid.solver.id();
    r.verdict = RunVerdict::error;
    return r;
}

// Private scratch directory, removed with its contents.
class ScratchDir {
public:
    ScratchDir()
    {
        auto pattern = (std::filesystem::temp_directory_path() / "geosat-XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw std::runtime_error("cannot create a scratch directory");
        }
        path_ = pattern;
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    ~ScratchDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

void attach_proof(RunRecord& record, const ExperimentGrid& grid, const Formula& formula,
                  const DratProof& proof, bool lenient)
{
    record.proof_metrics = compute_proof_metrics(proof);
    if (grid.check_proofs) {
        const auto report = check_rup_proof(formula, proof, CheckOptions{lenient});
        record.proof_checked = report.valid;
        if (!report.valid) {
            record.note = fmt::format("proof rejected at step {}: {}",
                                      report.failing_step.value_or(proof.steps.size()),
                                      report.reason ? to_string(*report.reason) : "");
        }
    }
}

void solve_internal(RunRecord& record, const ExperimentGrid& grid, const Formula& formula)
{
    SolverOutcome outcome;
    if (grid.solver.kind == SolverChoice::Kind::twosat) {
        outcome = solve_2sat(formula);
    } else {
        SolverConfig config;
        config.seed = record.instance_seed;
        config.time_limit = grid.timeout;
        config.emit_proof = grid.emit_proof;
        outcome = solve_cdcl(formula, config);
    }
    record.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(outcome.wall_time);
    if (outcome.timed_out()) {
        record.verdict = RunVerdict::timeout;
    } else if (outcome.satisfiable()) {
        if (evaluate(formula, outcome.assignment())) {
            record.verdict = RunVerdict::sat;
        } else {
            record.verdict = RunVerdict::error;
            record.note = "solver returned a non-model";
        }
    } else {
        record.verdict = RunVerdict::unsat;
        if (const DratProof* proof = outcome.proof()) {
            attach_proof(record, grid, formula, *proof, false);
        }
    }
}

void solve_external(RunRecord& record, const ExperimentGrid& grid, const Formula& formula)
{
    ScratchDir scratch;
    const auto instance_file = scratch.path() / "instance.cnf";
    write_dimacs_file(formula, instance_file);
    std::optional<std::filesystem::path> proof_file;
    if (grid.emit_proof) {
        proof_file = scratch.path() / "proof.drat";
    }
    auto run = run_external_solver(grid.solver.external, instance_file, proof_file, grid.timeout);
    record.verdict = run.verdict;
    record.wall_time = run.wall_time;
    record.note = std::move(run.reason);
    if (run.verdict == RunVerdict::unsat && run.proof) {
        // Third-party solvers often delete clauses this checker never saw
        // (e.g. after their own preprocessing), so deletions are lenient.
        attach_proof(record, grid, formula, *run.proof, true);
    }
}

} // namespace

RunRecord run_instance(const ExperimentGrid& grid, const GridCell& cell, std::uint32_t index)
{
    RunRecord record = blank_record(grid, cell, index);
    try {
        check_cell(grid, cell);
        const Formula formula =
            generate(GenParams{cell.model, cell.k, cell.n, cell.m, cell.dimension, record.instance_seed});
        if (grid.solver.kind == SolverChoice::Kind::external) {
            solve_external(record, grid, formula);
        } else {
            solve_internal(record, grid, formula);
        }
    } catch (const std::exception& e) {
        record.verdict = RunVerdict::error;
        record.proof_metrics.reset();
        record.proof_checked.reset();
        record.note = e.what();
    }
    return record;
}

std::vector<RunRecord> run_experiment(const ExperimentGrid& grid, unsigned workers,
                                      const ProgressFn& progress)
{
    grid.validate();
    if (workers == 0) {
        throw std::invalid_argument("workers must be at least 1");
    }

    // Invalid cells contribute a single ERROR record instead of their
    // instances.
    struct Task {
        const GridCell* cell;
        std::uint32_t index;
        std::optional<std::string> error;
    };
    const auto cells = expand_cells(grid);
    std::vector<Task> tasks;
    for (const auto& cell : cells) {
        try {
            check_cell(grid, cell);
        } catch (const std::exception& e) {
            tasks.push_back(Task{&cell, 0, std::string{e.what()}});
            continue;
        }
        for (std::uint32_t i = 0; i < grid.instances_per_cell; ++i) {
            tasks.push_back(Task{&cell, i, std::nullopt});
        }
    }

    std::vector<RunRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    std::size_t finished = 0;
    std::mutex progress_mutex;

    const auto work = [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
            const Task& task = tasks[t];
            if (task.error) {
                records[t] = blank_record(grid, *task.cell, task.index);
                records[t].note = *task.error;
            } else {
                records[t] = run_instance(grid, *task.cell, task.index);
            }
            if (progress) {
                const std::lock_guard lock{progress_mutex};
                progress(++finished, tasks.size());
            }
        }
    };

    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, tasks.size()));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(work);
        }
    }
    return records;
}

} // namespace geosat
