#include <benchmark/benchmark.h>

#include "geosat/instance_gen.hpp"
#include "geosat/proof.hpp"
#include "geosat/solver.hpp"

namespace {

using geosat::GenParams;
using geosat::Model;

// Density is passed in hundredths.
void BM_CdclUniform(benchmark::State& state)
{
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const auto m = static_cast<std::uint32_t>(state.range(0) * state.range(1) / 100);
    const auto f = geosat::generate_uniform(GenParams{Model::uniform, 3, n, m, std::nullopt, 1});
    std::uint64_t conflicts = 0;
    for (auto _ : state) {
        const auto out = geosat::solve_cdcl(f);
        conflicts += out.stats.conflicts;
    }
    state.counters["conflicts/s"] = benchmark::Counter(static_cast<double>(conflicts), benchmark::Counter::kIsRate);
}

void BM_CdclGeometric(benchmark::State& state)
{
    const auto d = static_cast<std::uint32_t>(state.range(0));
    const auto f = geosat::generate(GenParams{Model::geometric, 3, 300, 1200, d, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(geosat::solve_cdcl(f));
    }
}

void BM_TwoSat(benchmark::State& state)
{
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const auto f = geosat::generate_uniform(GenParams{Model::uniform, 2, n, n, std::nullopt, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(geosat::solve_2sat(f));
    }
}

void BM_CheckProof(benchmark::State& state)
{
    const auto f = geosat::generate_uniform(GenParams{Model::uniform, 3, 100, 520, std::nullopt, 2});
    geosat::SolverConfig config;
    config.emit_proof = true;
    const auto out = geosat::solve_cdcl(f, config);
    if (!out.unsatisfiable()) {
        state.SkipWithError("instance is satisfiable");
        return;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(geosat::check_rup_proof(f, *out.proof()));
    }
    state.counters["steps"] = static_cast<double>(out.proof()->steps.size());
}

} // namespace

BENCHMARK(BM_CdclUniform)->Args({100, 426})->Args({150, 426})->Args({200, 426})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CdclGeometric)->DenseRange(1, 7, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwoSat)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckProof)->Unit(benchmark::kMillisecond);
