#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <gtest/gtest.h>

#include "geosat/instance_gen.hpp"
#include "geosat/rng.hpp"
#include "geosat/torus.hpp"

using namespace geosat;

namespace {

std::vector<std::vector<int>> as_ints(const Formula& f)
{
    std::vector<std::vector<int>> out;
    for (const auto& c : f.clauses()) {
        std::vector<int> lits;
        for (const auto l : c) {
            lits.push_back(l.dimacs());
        }
        out.push_back(lits);
    }
    return out;
}

std::set<std::uint32_t> vars_of(const Clause& c)
{
    std::set<std::uint32_t> s;
    for (const auto l : c) {
        s.insert(l.var().index());
    }
    return s;
}

GenParams uniform(std::uint32_t k, std::uint32_t n, std::uint32_t m, std::uint64_t seed)
{
    return GenParams{Model::uniform, k, n, m, std::nullopt, seed};
}

GenParams geometric(std::uint32_t k, std::uint32_t n, std::uint32_t m, std::uint32_t d, std::uint64_t seed)
{
    return GenParams{Model::geometric, k, n, m, d, seed};
}

} // namespace

TEST(Rng, PublishedReferenceValues)
{
    // 10000th output of the standard-seeded 64-bit Mersenne Twister.
    Rng rng{5489};
    for (int i = 0; i < 9999; ++i) {
        (void)rng.next();
    }
    EXPECT_EQ(rng.next(), 9981545732273789042ULL);
    // First SplitMix64 output from state 0.
    EXPECT_EQ(derive_instance_seed(0, 0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, DistributionsStayInRange)
{
    Rng rng{1};
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.unit();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(rng.below(7), 7u);
    }
}

TEST(DeriveSeed, DeterministicAndCollisionFree)
{
    EXPECT_EQ(derive_instance_seed(42, 7), derive_instance_seed(42, 7));
    EXPECT_EQ(derive_instance_seed(42, 7), 14769051326987775908ULL);
    std::mt19937_64 rng{3};
    std::unordered_set<std::uint64_t> fixed_index;
    fixed_index.reserve(2'000'000);
    for (int i = 0; i < 1'000'000; ++i) {
        const auto s = rng();
        ASSERT_NE(derive_instance_seed(s, 0), derive_instance_seed(s, 1));
        fixed_index.insert(derive_instance_seed(s, 5));
    }
    EXPECT_EQ(fixed_index.size(), 1'000'000u);
}

TEST(GenParams, Validation)
{
    EXPECT_THROW(uniform(4, 3, 1, 0).validate(), std::invalid_argument);
    EXPECT_THROW(uniform(0, 3, 1, 0).validate(), std::invalid_argument);
    EXPECT_THROW((GenParams{Model::uniform, 2, 3, 1, 2u, 0}).validate(), std::invalid_argument);
    EXPECT_THROW((GenParams{Model::geometric, 2, 3, 1, std::nullopt, 0}).validate(), std::invalid_argument);
    EXPECT_THROW(geometric(2, 3, 1, 0, 0).validate(), std::invalid_argument);
    EXPECT_THROW((void)generate_uniform(geometric(2, 3, 1, 1, 0)), std::invalid_argument);
    EXPECT_THROW((void)generate_geometric(uniform(2, 3, 1, 0)), std::invalid_argument);
    EXPECT_NO_THROW(uniform(3, 3, 0, 0).validate());
}

TEST(GenerateUniform, FrozenOutput)
{
    const auto f = generate_uniform(uniform(3, 10, 4, 42));
    EXPECT_EQ(as_ints(f), (std::vector<std::vector<int>>{{7, -1, 5}, {7, 8, -9}, {-3, -1, 8}, {10, 1, 6}}));
    ASSERT_TRUE(f.meta().has_value());
    EXPECT_EQ(f.meta()->seed, 42u);
    EXPECT_EQ(f.meta()->model, Model::uniform);
}

TEST(GenerateUniform, OnlySubsetWhenKEqualsN)
{
    const auto f = generate_uniform(uniform(3, 3, 5, 9));
    ASSERT_EQ(f.num_clauses(), 5u);
    for (const auto& c : f.clauses()) {
        EXPECT_EQ(vars_of(c), (std::set<std::uint32_t>{1, 2, 3}));
    }
    const auto single = generate_uniform(uniform(1, 1, 1, 9));
    ASSERT_EQ(single.num_clauses(), 1u);
    EXPECT_EQ(single.clause(0)[0].var().index(), 1u);
}

TEST(GenerateUniform, DeterministicAndSeedSensitive)
{
    EXPECT_EQ(as_ints(generate_uniform(uniform(3, 50, 200, 1))), as_ints(generate_uniform(uniform(3, 50, 200, 1))));
    EXPECT_NE(as_ints(generate_uniform(uniform(3, 50, 200, 1))), as_ints(generate_uniform(uniform(3, 50, 200, 2))));
}

TEST(GenerateUniform, Marginals)
{
    const auto f = generate_uniform(uniform(3, 10, 100000, 77));
    std::vector<double> appearances(11, 0.0);
    double negated = 0.0;
    for (const auto& c : f.clauses()) {
        ASSERT_EQ(vars_of(c).size(), 3u);
        for (const auto l : c) {
            appearances[l.var().index()] += 1.0;
            negated += l.negated() ? 1.0 : 0.0;
        }
    }
    for (std::uint32_t v = 1; v <= 10; ++v) {
        EXPECT_NEAR(appearances[v] / 100000.0, 0.3, 0.01) << "variable " << v;
    }
    EXPECT_NEAR(negated / 300000.0, 0.5, 0.01);
}

TEST(GenerateGeometric, FrozenOutput)
{
    const auto g = generate_geometric(geometric(3, 10, 4, 2, 42));
    EXPECT_EQ(as_ints(g.formula),
              (std::vector<std::vector<int>>{{-2, 3, -8}, {4, -5, -2}, {10, -3, -5}, {4, 9, 7}}));
    EXPECT_EQ(g.layout.variable_points[0][0], 0.75515553295453897);
    EXPECT_EQ(g.layout.variable_points[0][1], 0.63903139385469743);
    EXPECT_EQ(g.formula.meta()->dimension, 2u);
}

TEST(GenerateGeometric, LayoutShapeAndNearestVariables)
{
    const auto g = generate_geometric(geometric(3, 50, 100, 2, 5));
    EXPECT_EQ(g.layout.variable_points.size(), 50u);
    EXPECT_EQ(g.layout.clause_points.size(), 100u);
    EXPECT_EQ(g.layout.variable_points.dimension(), 2u);
    std::vector<LabeledPoint> vars;
    for (std::uint32_t i = 0; i < 50; ++i) {
        vars.push_back({Variable{i + 1}, g.layout.variable_points.point(i)});
    }
    for (std::size_t c = 0; c < 100; ++c) {
        const auto expected = brute_force_k_nearest(vars, g.layout.clause_points.point(c), 3);
        const auto& clause = g.formula.clause(c);
        ASSERT_EQ(clause.size(), 3u);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(clause[j].var(), expected[j]);
        }
    }
}

TEST(GenerateGeometric, KEqualsNUsesEveryVariable)
{
    for (const std::uint32_t d : {1u, 3u, 20u}) {
        const auto g = generate_geometric(geometric(6, 6, 10, d, d));
        for (const auto& c : g.formula.clauses()) {
            EXPECT_EQ(vars_of(c).size(), 6u);
        }
    }
}

TEST(GenerateGeometric, SmallFigureConfiguration)
{
    const auto g = generate_geometric(geometric(3, 5, 4, 2, 2024));
    ASSERT_EQ(g.formula.num_clauses(), 4u);
    for (const auto& c : g.formula.clauses()) {
        EXPECT_EQ(vars_of(c).size(), 3u);
    }
}

TEST(GenerateGeometric, BackendsAgree)
{
    const auto params = geometric(3, 400, 400, 3, 8);
    EXPECT_EQ(as_ints(generate_geometric(params, BackendPolicy::kd_tree).formula),
              as_ints(generate_geometric(params, BackendPolicy::linear_scan).formula));
}

TEST(GenerateGeometric, Deterministic)
{
    const auto a = generate_geometric(geometric(3, 100, 300, 4, 17));
    const auto b = generate_geometric(geometric(3, 100, 300, 4, 17));
    EXPECT_EQ(as_ints(a.formula), as_ints(b.formula));
    EXPECT_EQ(a.layout, b.layout);
}

TEST(GenerateGeometric, Locality)
{
    // Chosen variables sit closer to their clause than random variables do.
    int local = 0;
    std::mt19937_64 pick{1};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto g = generate_geometric(geometric(3, 200, 200, 1, seed));
        double chosen = 0.0;
        double random = 0.0;
        for (std::size_t c = 0; c < 200; ++c) {
            const auto cp = g.layout.clause_points.point(c);
            for (const auto l : g.formula.clause(c)) {
                chosen += torus_distance(cp, g.layout.variable_points.point(l.var().index() - 1));
                random += torus_distance(cp, g.layout.variable_points.point(pick() % 200));
            }
        }
        local += chosen < random ? 1 : 0;
    }
    EXPECT_GE(local, 95);
}
