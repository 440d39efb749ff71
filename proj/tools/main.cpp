// geosat command-line entry point.
//
// Exit codes: 10 SAT, 20 UNSAT, 0 timeout or success, 1 proof rejected,
// 2 usage or operational error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cli_args.hpp"
#include "geosat/analysis.hpp"
#include "geosat/dimacs.hpp"
#include "geosat/drat.hpp"
#include "geosat/external_solver.hpp"
#include "geosat/harness.hpp"
#include "geosat/instance_gen.hpp"
#include "geosat/proof.hpp"
#include "geosat/records.hpp"
#include "geosat/rng.hpp"
#include "geosat/solver.hpp"

namespace fs = std::filesystem;
using namespace geosat;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitError = 2;

// Usage problems detected after CLI11 parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void print_seed(std::uint64_t seed)
{
    fmt::print("c master_seed={}\n", seed);
    std::fflush(stdout);
}

struct GenerateArgs {
    std::string model;
    std::uint32_t k = 3;
    std::uint32_t n = 0;
    std::optional<std::uint32_t> m;
    std::optional<double> density;
    std::optional<std::uint32_t> dim;
    std::optional<std::uint64_t> seed;
    std::uint32_t count = 1;
    std::string out = ".";
};

int cmd_generate(const GenerateArgs& a)
{
    GenParams params;
    params.model = parse_model(a.model);
    params.k = a.k;
    params.n = a.n;
    params.m = a.m ? *a.m : clause_count_for_density(*a.density, a.n);
    params.dimension = a.dim;
    if (params.model == Model::geometric && !a.dim) {
        throw UsageError("the geometric model needs --dim");
    }
    if (params.model == Model::uniform && a.dim) {
        throw UsageError("--dim only applies to the geometric model");
    }
    params.validate();

    const auto master = cli::resolve_seed(a.seed);
    print_seed(master);
    fs::create_directories(a.out);
    for (std::uint32_t i = 0; i < a.count; ++i) {
        params.seed = derive_instance_seed(master, i);
        const auto path = fs::path{a.out} / cli::instance_file_name(a.model, params.k, params.n, params.m,
                                                                   params.dimension, master, i);
        write_dimacs_file(generate(params), path);
        fmt::print("{} instance_seed={}\n", path.string(), params.seed);
    }
    return kExitOk;
}

struct SolveArgs {
    std::string file;
    std::string solver = "cdcl";
    std::optional<std::string> proof;
    std::optional<double> timeout_s;
    std::optional<std::uint64_t> seed;
};

void print_model(const Assignment& model)
{
    std::string line = "v";
    for (std::uint32_t v = 1; v <= model.num_vars(); ++v) {
        const auto lit = fmt::format(" {}{}", model.value(Variable{v}) ? "" : "-", v);
        if (line.size() + lit.size() > 78) {
            fmt::print("{}\n", line);
            line = "v";
        }
        line += lit;
    }
    fmt::print("{} 0\n", line);
}

int report_verdict(RunVerdict verdict)
{
    switch (verdict) {
    case RunVerdict::sat:
        return kExitSat;
    case RunVerdict::unsat:
        fmt::print("s UNSATISFIABLE\n");
        return kExitUnsat;
    case RunVerdict::timeout:
        fmt::print("s UNKNOWN\n");
        return kExitOk;
    case RunVerdict::error:
        break;
    }
    return kExitError;
}

int cmd_solve(const SolveArgs& a)
{
    const auto choice = SolverChoice::parse(a.solver);
    if (a.timeout_s && !(*a.timeout_s > 0.0)) {
        throw UsageError("--timeout-s must be positive");
    }
    const auto seed = cli::resolve_seed(a.seed);
    print_seed(seed);

    if (choice.kind == SolverChoice::Kind::external) {
        if (!fs::exists(a.file)) {
            throw std::runtime_error(fmt::format("cannot open {}", a.file));
        }
        std::optional<fs::path> proof;
        if (a.proof) {
            proof = *a.proof;
        }
        // Without a limit, wait for about a century.
        const auto run = run_external_solver(choice.external, a.file, proof,
                                             std::chrono::duration<double>(a.timeout_s.value_or(3.0e9)));
        if (run.verdict == RunVerdict::error) {
            throw std::runtime_error(run.reason);
        }
        if (run.verdict == RunVerdict::sat) {
            fmt::print("s SATISFIABLE\n");
        }
        return report_verdict(run.verdict);
    }

    const Formula formula = read_dimacs_file(a.file);
    SolverOutcome outcome;
    if (choice.kind == SolverChoice::Kind::twosat) {
        if (a.proof) {
            throw UsageError("the 2-SAT solver does not produce proofs");
        }
        outcome = solve_2sat(formula);
    } else {
        SolverConfig config;
        config.seed = seed;
        config.emit_proof = a.proof.has_value();
        if (a.timeout_s) {
            config.time_limit = std::chrono::duration<double>(*a.timeout_s);
        }
        outcome = solve_cdcl(formula, config);
    }
    fmt::print("c time={:.6f}s conflicts={} decisions={} propagations={}\n",
               std::chrono::duration<double>(outcome.wall_time).count(), outcome.stats.conflicts,
               outcome.stats.decisions, outcome.stats.propagations);

    if (outcome.satisfiable()) {
        fmt::print("s SATISFIABLE\n");
        print_model(outcome.assignment());
        return kExitSat;
    }
    if (outcome.unsatisfiable() && a.proof) {
        write_drat_file(outcome.proof() ? *outcome.proof() : DratProof{}, *a.proof);
    }
    return report_verdict(outcome.unsatisfiable() ? RunVerdict::unsat : RunVerdict::timeout);
}

struct CheckArgs {
    std::string cnf;
    std::string drat;
    bool lenient = false;
};

int cmd_check(const CheckArgs& a)
{
    const Formula formula = read_dimacs_file(a.cnf);
    const DratProof proof = read_drat_file(a.drat);
    const auto report = check_rup_proof(formula, proof, CheckOptions{a.lenient});
    if (report.valid) {
        fmt::print("VERIFIED\n");
        if (report.ignored_deletions > 0) {
            fmt::print("c ignored {} deletions of absent clauses\n", report.ignored_deletions);
        }
        return kExitOk;
    }
    const auto reason = report.reason ? to_string(*report.reason) : std::string_view{"unknown"};
    if (report.failing_step) {
        fmt::print("REJECTED step {}: {}\n", *report.failing_step + 1, reason);
    } else {
        fmt::print("REJECTED: {}\n", reason);
    }
    return kExitRejected;
}

struct BenchArgs {
    std::optional<std::string> model;
    std::string ks;
    std::string ns;
    std::optional<std::string> ms;
    std::optional<std::string> densities;
    std::optional<std::string> dims;
    std::uint32_t count = 1;
    std::optional<std::uint64_t> seed;
    std::string solver = "cdcl";
    double timeout_s = static_cast<double>(kDefaultTimeout.count());
    bool emit_proof = false;
    unsigned threads = 0;
    std::string out = "records.csv";
    bool quiet = false;
};

int cmd_bench(const BenchArgs& a)
{
    ExperimentGrid grid;
    grid.ks = cli::parse_uint_list(a.ks);
    grid.ns = cli::parse_uint_list(a.ns);
    if (a.ms) {
        grid.clause_counts = cli::parse_uint_list(*a.ms);
    } else {
        grid.densities = cli::parse_real_list(*a.densities);
    }
    if (a.dims) {
        grid.dimensions = cli::parse_dimension_list(*a.dims);
    }
    if (a.model) {
        const auto model = parse_model(*a.model);
        if (model == Model::geometric && !a.dims) {
            throw UsageError("the geometric model needs --dim");
        }
        const bool has_uniform = std::ranges::any_of(grid.dimensions, [](const auto& d) { return !d; });
        const bool has_geometric = std::ranges::any_of(grid.dimensions, [](const auto& d) { return d.has_value(); });
        if ((model == Model::uniform && has_geometric) || (model == Model::geometric && has_uniform)) {
            throw UsageError("--dim conflicts with --model (omit --model to mix both)");
        }
    }
    grid.instances_per_cell = a.count;
    grid.solver = SolverChoice::parse(a.solver);
    grid.timeout = std::chrono::duration<double>(a.timeout_s);
    grid.emit_proof = a.emit_proof;
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    grid.master_seed = cli::resolve_seed(a.seed);
    print_seed(grid.master_seed);

    const unsigned workers = a.threads > 0 ? a.threads : std::max(1u, std::thread::hardware_concurrency());
    ProgressFn progress;
    if (!a.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 50 == 0) {
                fmt::print(stderr, "\r{}/{} instances", done, total);
                if (done == total) {
                    fmt::print(stderr, "\n");
                }
            }
        };
    }
    const auto records = run_experiment(grid, workers, progress);
    persist_records_file(records, a.out);

    std::map<RunVerdict, std::size_t> tally;
    for (const auto& r : records) {
        ++tally[r.verdict];
        if (r.verdict == RunVerdict::error) {
            fmt::print(stderr, "error: k={} n={} m={} seed={}: {}\n", r.k, r.n, r.m, r.instance_seed, r.note);
        }
    }
    fmt::print("c wrote {} records to {} (SAT {}, UNSAT {}, TIMEOUT {}, ERROR {})\n", records.size(), a.out,
               tally[RunVerdict::sat], tally[RunVerdict::unsat], tally[RunVerdict::timeout],
               tally[RunVerdict::error]);
    return kExitOk;
}

struct AnalyzeArgs {
    std::string records;
    std::string out = ".";
    std::vector<std::string> metrics{"sat_ratio", "mean_wall_time", "mean_proof_clauses",
                                     "mean_max_proof_len"};
};

void write_file(const fs::path& path, const auto& writer)
{
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    writer(out);
    fmt::print("{}\n", path.string());
}

int cmd_analyze(const AnalyzeArgs& a)
{
    std::vector<MatrixMetric> metrics;
    for (const auto& name : a.metrics) {
        try {
            metrics.push_back(parse_matrix_metric(name));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const auto records = load_records_file(a.records);
    fs::create_directories(a.out);
    const fs::path dir{a.out};
    write_file(dir / "ratios.csv", [&](std::ostream& o) { write_ratio_table(records, o); });
    write_file(dir / "thresholds.csv", [&](std::ostream& o) { write_threshold_table(records, o); });

    std::set<std::pair<std::uint32_t, std::uint32_t>> kn;
    for (const auto& r : records) {
        kn.emplace(r.k, r.n);
    }
    for (const auto& [k, n] : kn) {
        std::vector<RunRecord> subset;
        std::ranges::copy_if(records, std::back_inserter(subset),
                             [k = k, n = n](const RunRecord& r) { return r.k == k && r.n == n; });
        for (const auto metric : metrics) {
            const auto matrix = matrix_export(subset, metric);
            write_file(dir / fmt::format("matrix_{}_k{}_n{}.csv", to_string(metric), k, n),
                       [&](std::ostream& o) { write_matrix_csv(matrix, o); });
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"geosat: random k-SAT on the torus and in the uniform model"};
    app.require_subcommand(1, 1);
    app.footer("Exit codes: 10 SAT, 20 UNSAT, 0 timeout/success, 1 proof rejected, 2 error.\n"
               "GEOSAT_SEED supplies the master seed when --seed is absent.");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write random instances as DIMACS files");
    generate->add_option("--model", gen.model, "uniform or geometric")
        ->required()
        ->check(CLI::IsMember({"uniform", "geometric"}));
    generate->add_option("--k", gen.k, "Literals per clause")->capture_default_str();
    generate->add_option("--n", gen.n, "Number of variables")->required();
    auto* gen_m = generate->add_option("--m", gen.m, "Number of clauses");
    auto* gen_density = generate->add_option("--density", gen.density, "Clause density m/n (m rounded half up)");
    gen_m->excludes(gen_density);
    generate->add_option("--dim", gen.dim, "Torus dimension (geometric only)")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen.seed, "Master seed");
    generate->add_option("--count", gen.count, "Number of instances")->capture_default_str()->check(CLI::PositiveNumber);
    generate->add_option("--out", gen.out, "Output directory")->capture_default_str();

    SolveArgs sol;
    auto* solve = app.add_subcommand("solve", "Solve a DIMACS file");
    solve->add_option("file", sol.file, "DIMACS CNF file")->required();
    solve->add_option("--solver", sol.solver, "cdcl, twosat or external:<path>")->capture_default_str();
    solve->add_option("--proof", sol.proof, "Write a DRAT proof here when UNSAT");
    solve->add_option("--timeout-s", sol.timeout_s, "Time limit in seconds (default: none)");
    solve->add_option("--seed", sol.seed, "Solver seed");

    CheckArgs chk;
    auto* check = app.add_subcommand("check", "Verify a DRAT refutation by reverse unit propagation");
    check->add_option("cnf", chk.cnf, "DIMACS CNF file")->required();
    check->add_option("drat", chk.drat, "Textual DRAT proof")->required();
    check->add_flag("--lenient", chk.lenient, "Ignore deletions of clauses that are not present");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Run a parameter grid and write run records as CSV");
    bench->add_option("--model", bench_args.model, "Restrict to uniform or geometric")
        ->check(CLI::IsMember({"uniform", "geometric"}));
    bench->add_option("--k", bench_args.ks, "k values, e.g. 3 or 2,3")->required();
    bench->add_option("--n", bench_args.ns, "n values, e.g. 300 or 100:500:100")->required();
    auto* bench_m = bench->add_option("--m", bench_args.ms, "Clause counts, e.g. 300:3000:100");
    auto* bench_density = bench->add_option("--density", bench_args.densities, "Densities, e.g. 1:6:0.2");
    bench_m->excludes(bench_density);
    bench->add_option("--dim", bench_args.dims, "Dimensions, e.g. 1:7,uniform (default: uniform)");
    bench->add_option("--count", bench_args.count, "Instances per cell")->capture_default_str();
    bench->add_option("--seed", bench_args.seed, "Master seed");
    bench->add_option("--solver", bench_args.solver, "cdcl, twosat or external:<path>")->capture_default_str();
    bench->add_option("--timeout-s", bench_args.timeout_s, "Per-instance time limit in seconds")->capture_default_str();
    bench->add_flag("--emit-proof", bench_args.emit_proof, "Record, measure and check DRAT proofs");
    bench->add_option("--threads", bench_args.threads, "Worker threads (default: all cores)");
    bench->add_option("--out", bench_args.out, "Records CSV path")->capture_default_str();
    bench->add_flag("--quiet", bench_args.quiet, "No progress output");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Ratio tables, threshold estimates and matrices from records");
    analyze->add_option("records", an.records, "Records CSV from bench")->required();
    analyze->add_option("--out", an.out, "Output directory")->capture_default_str();
    analyze->add_option("--metric", an.metrics,
                        "Matrix metrics: sat_ratio, mean_wall_time, mean_proof_clauses, mean_max_proof_len")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*generate) {
            if (!gen.m && !gen.density) {
                throw UsageError("generate needs --m or --density");
            }
            return cmd_generate(gen);
        }
        if (*solve) {
            return cmd_solve(sol);
        }
        if (*check) {
            return cmd_check(chk);
        }
        if (*bench) {
            if (!bench_args.ms && !bench_args.densities) {
                throw UsageError("bench needs --m or --density");
            }
            return cmd_bench(bench_args);
        }
        return cmd_analyze(an);
    } catch (const UsageError& e) {
        fmt::print(stderr, "usage error: {}\n", e.what());
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
    }
    return kExitError;
}
