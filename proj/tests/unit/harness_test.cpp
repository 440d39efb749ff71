#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "geosat/harness.hpp"
#include "geosat/records.hpp"

using namespace geosat;
using namespace std::chrono_literals;

namespace {

RunRecord random_record(std::mt19937_64& rng)
{
    RunRecord r;
    r.model = rng() % 2 ? Model::geometric : Model::uniform;
    r.k = static_cast<std::uint32_t>(1 + rng() % 8);
    r.n = static_cast<std::uint32_t>(1 + rng() % 100000);
    r.m = static_cast<std::uint32_t>(rng() % 1000000);
    if (r.model == Model::geometric) {
        r.dimension = static_cast<std::uint32_t>(1 + rng() % 100);
    }
    r.instance_seed = rng();
    static const char* ids[] = {"cdcl", "twosat", "external:/opt/a,b", "external:/x/\"q\""};
    r.solver_id = ids[rng() % 4];
    r.verdict = static_cast<RunVerdict>(rng() % 4);
    r.wall_time = std::chrono::microseconds{static_cast<std::int64_t>(rng() % 100'000'000'000ULL)};
    if (r.verdict == RunVerdict::unsat && rng() % 2) {
        ProofMetrics p;
        p.additions = rng() % 10000;
        p.deletions = rng() % 10000;
        p.total_clauses = p.additions + p.deletions;
        p.literals_in_additions = rng() % 100000;
        p.literals_in_deletions = rng() % 100000;
        p.total_literals = p.literals_in_additions + p.literals_in_deletions;
        p.max_clause_length = rng() % 300;
        r.proof_metrics = p;
        r.proof_checked = rng() % 2 == 0;
    }
    return r;
}

ExperimentGrid small_grid()
{
    ExperimentGrid g;
    g.ks = {3};
    g.ns = {30, 40};
    g.densities = {3.0, 4.3, 6.0};
    g.dimensions = {std::nullopt, 1u, 3u};
    g.instances_per_cell = 3;
    g.master_seed = 2024;
    g.emit_proof = true;
    return g;
}

std::string csv_of(const std::vector<RunRecord>& records)
{
    std::ostringstream out;
    persist_records(records, out);
    return out.str();
}

std::filesystem::path stub(const char* name)
{
    return std::filesystem::path{GEOSAT_TEST_DATA_DIR} / name;
}

} // namespace

TEST(Records, RoundTrip)
{
    std::mt19937_64 rng{8};
    std::vector<RunRecord> records;
    for (int i = 0; i < 1000; ++i) {
        records.push_back(random_record(rng));
    }
    const auto text = csv_of(records);
    std::istringstream in{text};
    EXPECT_EQ(load_records(in), records);
    EXPECT_EQ(csv_of(records), text);
}

TEST(Records, HandWrittenRow)
{
    RunRecord r;
    r.model = Model::geometric;
    r.k = 3;
    r.n = 300;
    r.m = 900;
    r.dimension = 2;
    r.instance_seed = 17;
    r.solver_id = "cdcl";
    r.verdict = RunVerdict::unsat;
    r.wall_time = 1'500'000us;
    r.proof_metrics = ProofMetrics{3, 2, 1, 4, 2, 2, 2};
    r.proof_checked = true;
    const std::vector<RunRecord> one{r};
    EXPECT_EQ(csv_of(one), std::string{kRecordCsvHeader} +
                               "\ngeometric,3,300,900,3,2,17,cdcl,UNSAT,1.500000,3,2,1,4,2,2,2,true\n");
    r.model = Model::uniform;
    r.dimension.reset();
    r.verdict = RunVerdict::timeout;
    r.proof_metrics.reset();
    r.proof_checked.reset();
    r.solver_id = "a,\"b\"";
    const std::vector<RunRecord> two{r};
    EXPECT_EQ(csv_of(two), std::string{kRecordCsvHeader} +
                               "\nuniform,3,300,900,3,,17,\"a,\"\"b\"\"\",TIMEOUT,1.500000,,,,,,,,\n");
}

TEST(Records, ErrorsCarryRowNumbers)
{
    const auto expect_row = [](const std::string& text, std::size_t row) {
        std::istringstream in{text};
        try {
            (void)load_records(in);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), row) << e.what();
        }
    };
    const std::string h{kRecordCsvHeader};
    const std::string good = "uniform,3,10,20,2,,1,cdcl,SAT,0.000100,,,,,,,,\n";
    expect_row("model,k\n", 1);
    expect_row(h + "\n" + good + "uniform,3,10,20\n", 3);
    expect_row(h + "\n" + good + good + "uniform,3,10,20,2,,1,cdcl,MAYBE,0.000100,,,,,,,,\n", 4);
    expect_row(h + "\nuniform,3,10,20,2,4,1,cdcl,SAT,0.000100,,,,,,,,\n", 2);
    expect_row(h + "\nuniform,3,10,20,2,,1,cdcl,SAT,0.1,,,,,,,,\n", 2);
    expect_row(h + "\nuniform,3,10,20,2,,1,cdcl,UNSAT,0.000100,1,1,,,,,,\n", 2);
    expect_row(h + "\nuniform,3,10,20,2,,1,\"cdcl,SAT,0.000100,,,,,,,,\n", 2);
}

TEST(Grid, Validation)
{
    auto g = small_grid();
    EXPECT_NO_THROW(g.validate());
    auto both = g;
    both.clause_counts = {10};
    EXPECT_THROW(both.validate(), std::invalid_argument);
    auto neither = g;
    neither.densities.clear();
    EXPECT_THROW(neither.validate(), std::invalid_argument);
    auto no_k = g;
    no_k.ks.clear();
    EXPECT_THROW(no_k.validate(), std::invalid_argument);
    auto negative = g;
    negative.densities = {-1.0};
    EXPECT_THROW(negative.validate(), std::invalid_argument);
    auto zero = g;
    zero.instances_per_cell = 0;
    EXPECT_THROW(zero.validate(), std::invalid_argument);
    auto no_time = g;
    no_time.timeout = 0s;
    EXPECT_THROW(no_time.validate(), std::invalid_argument);
    EXPECT_THROW((void)run_experiment(g, 0), std::invalid_argument);
    EXPECT_THROW((void)run_experiment(neither, 1), std::invalid_argument);
}

TEST(Grid, ClauseCountRounding)
{
    EXPECT_EQ(clause_count_for_density(4.3, 300), 1290u);
    EXPECT_EQ(clause_count_for_density(0.5, 3), 2u); // 1.5 rounds up
    EXPECT_EQ(clause_count_for_density(0.0, 100), 0u);
    EXPECT_EQ(clause_count_for_density(1.02, 100000), 102000u);
    EXPECT_THROW((void)clause_count_for_density(-0.1, 10), std::domain_error);
    EXPECT_THROW((void)clause_count_for_density(1e10, 100), std::domain_error);
}

TEST(Grid, CellOrder)
{
    ExperimentGrid g;
    g.ks = {2, 3};
    g.ns = {10};
    g.densities = {1.0, 1.04, 2.0}; // 1.04 * 10 rounds onto 10 as well
    g.dimensions = {2u, std::nullopt};
    const auto cells = expand_cells(g);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[0], (GridCell{Model::geometric, 2, 10, 10, 2u}));
    EXPECT_EQ(cells[1], (GridCell{Model::geometric, 2, 10, 20, 2u}));
    EXPECT_EQ(cells[2], (GridCell{Model::geometric, 3, 10, 10, 2u}));
    EXPECT_EQ(cells[7], (GridCell{Model::uniform, 3, 10, 20, std::nullopt}));
}

TEST(Grid, CellSeedsIgnoreTheRestOfTheGrid)
{
    const GridCell cell{Model::uniform, 3, 50, 200, std::nullopt};
    const GridCell other{Model::uniform, 3, 50, 201, std::nullopt};
    EXPECT_NE(cell_seed(1, cell), cell_seed(1, other));
    EXPECT_NE(cell_seed(1, cell), cell_seed(2, cell));
    EXPECT_NE(instance_seed(1, cell, 0), instance_seed(1, cell, 1));
    EXPECT_EQ(instance_seed(1, cell, 4), instance_seed(1, cell, 4));
}

TEST(Harness, DeterministicAcrossWorkerCounts)
{
    const auto g = small_grid();
    auto a = run_experiment(g, 1);
    auto b = run_experiment(g, 8);
    ASSERT_EQ(a.size(), 2u * 3u * 3u * 3u);
    for (auto* rs : {&a, &b}) {
        for (auto& r : *rs) {
            r.wall_time = {};
        }
    }
    EXPECT_EQ(csv_of(a), csv_of(b));
    for (const auto& r : a) {
        ASSERT_NE(r.verdict, RunVerdict::error) << r.note;
        if (r.verdict == RunVerdict::unsat) {
            ASSERT_TRUE(r.proof_metrics.has_value());
            EXPECT_EQ(r.proof_checked, true);
        }
    }
}

TEST(Harness, ProgressReachesTotal)
{
    auto g = small_grid();
    g.dimensions = {1u};
    std::size_t last = 0;
    std::size_t total = 0;
    const auto records = run_experiment(g, 4, [&](std::size_t done, std::size_t all) {
        EXPECT_EQ(done, last + 1);
        last = done;
        total = all;
    });
    EXPECT_EQ(last, records.size());
    EXPECT_EQ(total, records.size());
}

TEST(Harness, InvalidCellYieldsOneErrorRecord)
{
    ExperimentGrid g;
    g.ks = {2, 3};
    g.ns = {20};
    g.densities = {1.0};
    g.instances_per_cell = 4;
    g.solver = SolverChoice::parse("twosat");
    const auto records = run_experiment(g, 2);
    ASSERT_EQ(records.size(), 5u);
    EXPECT_EQ(records.back().verdict, RunVerdict::error);
    EXPECT_EQ(records.back().k, 3u);
    EXPECT_FALSE(records.back().note.empty());

    ExperimentGrid tiny;
    tiny.ks = {5};
    tiny.ns = {3}; // k > n
    tiny.clause_counts = {1};
    tiny.instances_per_cell = 10;
    const auto bad = run_experiment(tiny, 1);
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0].verdict, RunVerdict::error);
}

TEST(Harness, TimeoutDiscipline)
{
    ExperimentGrid g;
    g.ks = {3};
    g.ns = {400};
    g.densities = {4.26};
    g.instances_per_cell = 4;
    g.timeout = 100ms;
    const auto records = run_experiment(g, 2);
    for (const auto& r : records) {
        EXPECT_LE(r.wall_time, 110ms) << to_string(r.verdict);
    }
}

TEST(SolverChoice, Parse)
{
    EXPECT_EQ(SolverChoice::parse("cdcl").id(), "cdcl");
    EXPECT_EQ(SolverChoice::parse("2sat").id(), "twosat");
    EXPECT_EQ(SolverChoice::parse("external:/bin/x").id(), "external:/bin/x");
    EXPECT_THROW((void)SolverChoice::parse("external:"), std::invalid_argument);
    EXPECT_THROW((void)SolverChoice::parse("minisat"), std::invalid_argument);
}

class ExternalSolverTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path() /
               ("geosat-ext-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir_);
        instance_ = dir_ / "f.cnf";
        std::ofstream{instance_} << "p cnf 1 2\n1 0\n-1 0\n";
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::filesystem::path dir_;
    std::filesystem::path instance_;
};

TEST_F(ExternalSolverTest, ExitCodes)
{
    const auto sat = run_external_solver({stub("stub_sat.sh")}, instance_, std::nullopt, 10s);
    EXPECT_EQ(sat.verdict, RunVerdict::sat);
    EXPECT_EQ(sat.exit_code, 10);

    const auto unsat = run_external_solver({stub("stub_unsat.sh")}, instance_, dir_ / "p.drat", 10s);
    EXPECT_EQ(unsat.verdict, RunVerdict::unsat);
    ASSERT_TRUE(unsat.proof.has_value());
    EXPECT_EQ(unsat.proof->steps.size(), 2u);

    const auto garbage = run_external_solver({stub("stub_garbage.sh")}, instance_, std::nullopt, 10s);
    EXPECT_EQ(garbage.verdict, RunVerdict::error);
    EXPECT_FALSE(garbage.reason.empty());

    const auto missing = run_external_solver({dir_ / "nope"}, instance_, std::nullopt, 10s);
    EXPECT_EQ(missing.verdict, RunVerdict::error);
    EXPECT_FALSE(missing.exit_code.has_value());
}

TEST_F(ExternalSolverTest, KilledAtTimeout)
{
    const auto start = std::chrono::steady_clock::now();
    const auto run = run_external_solver({stub("stub_sleep.sh")}, instance_, std::nullopt, 200ms);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    EXPECT_EQ(run.verdict, RunVerdict::timeout);
    EXPECT_LT(elapsed, 2s);
    EXPECT_LE(run.wall_time, 220ms + 100ms);
}

TEST(Harness, ExternalGridChecksProofs)
{
    ExperimentGrid g;
    g.ks = {3};
    g.ns = {10};
    g.clause_counts = {5};
    g.instances_per_cell = 2;
    g.emit_proof = true;
    g.solver = SolverChoice::parse("external:" + stub("stub_unsat.sh").string());
    const auto records = run_experiment(g, 2);
    ASSERT_EQ(records.size(), 2u);
    for (const auto& r : records) {
        EXPECT_EQ(r.verdict, RunVerdict::unsat);
        ASSERT_TRUE(r.proof_metrics.has_value());
        EXPECT_EQ(r.proof_metrics->total_clauses, 2u);
        // The stub's proof is nonsense for a random instance.
        EXPECT_EQ(r.proof_checked, false);
    }
}
