#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "geosat/dimacs.hpp"
#include "geosat/drat.hpp"
#include "geosat/errors.hpp"
#include "geosat/instance_gen.hpp"
#include "test_support.hpp"

using namespace geosat;
using geosat::test::clause;

namespace {

std::string dimacs_text(const Formula& f)
{
    std::ostringstream out;
    write_dimacs(f, out);
    return out.str();
}

Formula parse_dimacs(const std::string& text)
{
    std::istringstream in{text};
    return read_dimacs(in);
}

std::string drat_text(const DratProof& p)
{
    std::ostringstream out;
    write_drat(p, out);
    return out.str();
}

DratProof parse_drat(const std::string& text)
{
    std::istringstream in{text};
    return read_drat(in);
}

std::size_t error_line(const std::string& text)
{
    try {
        (void)parse_dimacs(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
    return 0;
}

} // namespace

TEST(WriteDimacs, BodyLines)
{
    const Formula f{2, 2, {clause({1, -2})}};
    EXPECT_EQ(dimacs_text(f), "p cnf 2 1\n1 -2 0\n");
    EXPECT_EQ(dimacs_text(Formula{5, 3, {}}), "p cnf 5 0\n");
}

TEST(WriteDimacs, MetadataComment)
{
    const auto f = generate_uniform(GenParams{Model::uniform, 3, 5, 1, std::nullopt, 9});
    const auto text = dimacs_text(f);
    EXPECT_EQ(text.rfind("c geosat model=uniform k=3 n=5 m=1 seed=9\np cnf 5 1\n", 0), 0u) << text;
    const auto g = generate_geometric(GenParams{Model::geometric, 3, 5, 1, 2u, 9}).formula;
    EXPECT_NE(dimacs_text(g).find("dim=2"), std::string::npos);
    const auto back = parse_dimacs(dimacs_text(g));
    ASSERT_TRUE(back.meta().has_value());
    EXPECT_EQ(back.meta()->model, Model::geometric);
    EXPECT_EQ(back.meta()->dimension, 2u);
    EXPECT_EQ(back.meta()->seed, 9u);
    EXPECT_EQ(back.clause_length(), 3u);
}

TEST(ReadDimacs, Basic)
{
    const auto f = parse_dimacs("p cnf 2 1\n1 -2 0\n");
    EXPECT_EQ(f.num_vars(), 2u);
    ASSERT_EQ(f.num_clauses(), 1u);
    EXPECT_EQ(f.clause(0), clause({1, -2}));
}

TEST(ReadDimacs, ClauseAcrossLinesCommentsAndPercent)
{
    const auto f = parse_dimacs("c hello\r\np cnf 3 2\n1 -2\n0 3\n  -1 0\n%\n0\n");
    ASSERT_EQ(f.num_clauses(), 2u);
    EXPECT_EQ(f.clause(0), clause({1, -2}));
    EXPECT_EQ(f.clause(1), clause({3, -1}));
    EXPECT_EQ(f.clause_length(), 2u);
}

TEST(ReadDimacs, MixedLengthsAndDuplicates)
{
    const auto f = parse_dimacs("p cnf 3 3\n1 0\n1 2 3 0\n1 0\n");
    EXPECT_EQ(f.clause_length(), 0u);
    EXPECT_EQ(f.num_clauses(), 3u);
}

TEST(ReadDimacs, Errors)
{
    EXPECT_EQ(error_line("p cnf 2 2\n1 -2 0\n"), 2u);  // count mismatch (reported at EOF)
    EXPECT_EQ(error_line("1 2 0\n"), 1u);              // missing header
    EXPECT_EQ(error_line("p cnf 2 1\n1 3 0\n"), 2u);   // literal out of range
    EXPECT_EQ(error_line("c x\np cnf 2 1\n1 x 0\n"), 3u);
    EXPECT_EQ(error_line("p cnf 2 1\n1 2\n"), 2u);     // missing terminator
    EXPECT_EQ(error_line("p cnf 2 1\np cnf 2 1\n1 0\n"), 2u);
    EXPECT_EQ(error_line("p cnf 2 1\n1 -1 0\n"), 2u);  // repeated variable
    EXPECT_EQ(error_line("p cnf 2 1\n1 0\n2 0\n"), 3u); // too many clauses
    EXPECT_EQ(error_line("p dnf 2 1\n1 0\n"), 1u);
}

TEST(Dimacs, RoundTripRandomFormulas)
{
    std::mt19937_64 rng{21};
    for (int i = 0; i < 1000; ++i) {
        const auto model = (i % 2 == 0) ? Model::uniform : Model::geometric;
        const auto k = static_cast<std::uint32_t>(1 + rng() % 4);
        const auto n = static_cast<std::uint32_t>(k + rng() % 30);
        const auto m = static_cast<std::uint32_t>(rng() % 60);
        GenParams p{model, k, n, m, std::nullopt, rng()};
        if (model == Model::geometric) {
            p.dimension = static_cast<std::uint32_t>(1 + rng() % 5);
        }
        const auto f = generate(p);
        const auto text = dimacs_text(f);
        const auto back = parse_dimacs(text);
        ASSERT_EQ(back.num_vars(), f.num_vars());
        ASSERT_EQ(back.clause_length(), f.clause_length());
        ASSERT_TRUE(std::equal(back.clauses().begin(), back.clauses().end(), f.clauses().begin(),
                               f.clauses().end()));
        ASSERT_EQ(back.meta(), f.meta());
        ASSERT_EQ(dimacs_text(back), text);
    }
}

TEST(Dimacs, FileHelpers)
{
    const auto path = std::filesystem::temp_directory_path() / "geosat_cnf_io_test.cnf";
    const Formula f{3, 2, {clause({1, -2}), clause({-3, 2})}};
    write_dimacs_file(f, path);
    EXPECT_EQ(read_dimacs_file(path).num_clauses(), 2u);
    std::filesystem::remove(path);
    EXPECT_THROW((void)read_dimacs_file(path), std::runtime_error);
}

TEST(WriteDrat, Lines)
{
    const DratProof p{{{StepKind::add, clause({1})}, {StepKind::remove, clause({1, 2})}, {StepKind::add, {}}}};
    EXPECT_EQ(drat_text(p), "1 0\nd 1 2 0\n0\n");
}

TEST(ReadDrat, Basics)
{
    EXPECT_TRUE(parse_drat("").steps.empty());
    const auto p = parse_drat("c comment\n1 -2\n 0\nd 3 0\n0\n");
    ASSERT_EQ(p.steps.size(), 3u);
    EXPECT_EQ(p.steps[0].literals, clause({1, -2}));
    EXPECT_EQ(p.steps[1].kind, StepKind::remove);
    EXPECT_TRUE(p.steps[2].literals.empty());
}

TEST(ReadDrat, Errors)
{
    EXPECT_THROW((void)parse_drat("1 2\n"), ParseError);
    EXPECT_THROW((void)parse_drat("1 q 0\n"), ParseError);
    EXPECT_THROW((void)parse_drat("d\n"), ParseError);
}

TEST(Drat, RoundTripRandomProofs)
{
    std::mt19937_64 rng{8};
    for (int trial = 0; trial < 1000; ++trial) {
        DratProof p;
        const auto steps = trial == 0 ? 10000 : static_cast<int>(rng() % 40);
        for (int s = 0; s < steps; ++s) {
            DratStep step;
            step.kind = rng() % 4 == 0 ? StepKind::remove : StepKind::add;
            const auto len = rng() % 6;
            std::vector<std::uint32_t> used;
            for (std::size_t j = 0; j < len; ++j) {
                const auto v = static_cast<std::uint32_t>(1 + rng() % 1000);
                step.literals.emplace_back(Variable{v}, (rng() & 1u) != 0);
            }
            if (step.kind == StepKind::remove && step.literals.empty()) {
                step.literals.emplace_back(Variable{1}, false);
            }
            p.steps.push_back(std::move(step));
        }
        const auto text = drat_text(p);
        ASSERT_EQ(parse_drat(text), p);
        ASSERT_EQ(drat_text(parse_drat(text)), text);
    }
}
