#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "geosat/formula.hpp"
#include "geosat/torus.hpp"
#include "test_support.hpp"

using namespace geosat;
using geosat::test::clause;
using geosat::test::cnf;

TEST(Literal, DimacsRoundTripAndNegation)
{
    const auto lit = Literal::from_dimacs(-7);
    EXPECT_EQ(lit.var().index(), 7u);
    EXPECT_TRUE(lit.negated());
    EXPECT_EQ(lit.dimacs(), -7);
    EXPECT_EQ(~~lit, lit);
    EXPECT_EQ((~lit).dimacs(), 7);
    EXPECT_EQ(Literal::from_code(lit.code()), lit);
    EXPECT_THROW((void)Literal::from_dimacs(0), std::invalid_argument);
}

TEST(Formula, RejectsBrokenClauses)
{
    // variable beyond n
    EXPECT_THROW(Formula(2, 2, {clause({1, 3})}), std::invalid_argument);
    // repeated variable
    EXPECT_THROW(Formula(3, 2, {clause({1, -1})}), std::invalid_argument);
    // wrong length
    EXPECT_THROW(Formula(3, 3, {clause({1, 2})}), std::invalid_argument);
    // dimension only with the geometric model
    EXPECT_THROW(Formula(3, 0, {}, GenerationMeta{Model::uniform, 2, 0}), std::invalid_argument);
    EXPECT_THROW(Formula(3, 0, {}, GenerationMeta{Model::geometric, std::nullopt, 0}),
                 std::invalid_argument);
}

TEST(Formula, DuplicateClausesAllowed)
{
    const Formula f{2, 2, {clause({1, 2}), clause({1, 2})}};
    EXPECT_EQ(f.num_clauses(), 2u);
}

TEST(Formula, FromClausesInfersLength)
{
    EXPECT_EQ(cnf(3, {{1, 2}, {-1, 3}}).clause_length(), 2u);
    EXPECT_EQ(cnf(3, {{1}, {-1, 3}}).clause_length(), 0u);
    EXPECT_EQ(cnf(3, {}).clause_length(), 0u);
}

TEST(Density, Examples)
{
    EXPECT_NEAR(density(Formula{300, 0, std::vector<Clause>(1702)}), 1702.0 / 300.0, 1e-15);
    EXPECT_DOUBLE_EQ(density(Formula{300, 0, std::vector<Clause>(300)}), 1.0);
    EXPECT_DOUBLE_EQ(density(Formula{100, 0, std::vector<Clause>(427)}), 4.27);
    EXPECT_THROW((void)density(Formula{0, 0, {}}), std::domain_error);
}

TEST(Evaluate, IntroductionExample)
{
    const auto f = cnf(5, {{3, 1, -4}, {2, 3}, {-2, 3, -1, 4}, {-2, -4, -5}});
    for (const bool x5 : {false, true}) {
        Assignment a{5};
        a.set(Variable{3}, true);
        a.set(Variable{5}, x5);
        EXPECT_TRUE(evaluate(f, a));
    }
}

TEST(Evaluate, EmptyAndContradictory)
{
    EXPECT_TRUE(evaluate(Formula{4, 3, {}}, Assignment{4}));
    const auto f = cnf(1, {{1}, {-1}});
    EXPECT_FALSE(evaluate(f, Assignment{1, false}));
    EXPECT_FALSE(evaluate(f, Assignment{1, true}));
    EXPECT_THROW((void)evaluate(f, Assignment{2}), std::domain_error);
}

TEST(Evaluate, MonotoneUnderSatisfiedAdditions)
{
    std::mt19937_64 rng{11};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Clause> cs;
        Assignment a{6};
        for (std::uint32_t v = 1; v <= 6; ++v) {
            a.set(Variable{v}, (rng() & 1u) != 0);
        }
        for (int j = 0; j < 8; ++j) {
            // clause containing a literal true under a
            const auto v = static_cast<std::uint32_t>(rng() % 6 + 1);
            cs.push_back({Literal{Variable{v}, !a.value(Variable{v})}});
        }
        const Formula f = Formula::from_clauses(6, cs);
        ASSERT_TRUE(evaluate(f, a));
        cs.push_back({Literal{Variable{1}, !a.value(Variable{1})}});
        EXPECT_TRUE(evaluate(Formula::from_clauses(6, cs), a));
    }
}

TEST(CircularDiff, Examples)
{
    EXPECT_NEAR(circular_diff(0.9, 0.1), 0.2, 1e-15);
    EXPECT_EQ(circular_diff(0.3, 0.3), 0.0);
    EXPECT_EQ(circular_diff(0.0, 0.5), 0.5);
    EXPECT_THROW((void)circular_diff(1.0, 0.2), std::domain_error);
    EXPECT_THROW((void)circular_diff(0.2, -0.1), std::domain_error);
    EXPECT_THROW((void)circular_diff(std::nan(""), 0.2), std::domain_error);
}

TEST(CircularDiff, SymmetricAndBounded)
{
    std::mt19937_64 rng{1};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        EXPECT_EQ(circular_diff(a, b), circular_diff(b, a));
        EXPECT_LE(circular_diff(a, b), 0.5);
    }
}

TEST(TorusDistance, Examples)
{
    EXPECT_NEAR(torus_distance(TorusPoint{{0.0, 0.0}}, TorusPoint{{0.5, 0.5}}), 0.7071067812, 1e-10);
    const TorusPoint p{{0.1, 0.7, 0.3}};
    EXPECT_EQ(torus_distance(p, p), 0.0);
    EXPECT_NEAR(torus_distance(TorusPoint{{0.95}}, TorusPoint{{0.05}}), 0.1, 1e-12);
    EXPECT_THROW((void)torus_distance(TorusPoint{{0.1}}, TorusPoint{{0.1, 0.2}}), std::domain_error);
    EXPECT_THROW(TorusPoint({0.5, 1.0}), std::domain_error);
    EXPECT_THROW(TorusPoint(std::vector<double>{}), std::domain_error);
}

TEST(TorusDistance, TriangleInequalityAndSquaredOrdering)
{
    std::mt19937_64 rng{2};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    for (const std::uint32_t d : {1u, 2u, 3u, 10u}) {
        const auto draw = [&] {
            std::vector<double> c(d);
            for (auto& x : c) {
                x = u(rng);
            }
            return TorusPoint{c};
        };
        for (int i = 0; i < 1000; ++i) {
            const auto p = draw();
            const auto q = draw();
            const auto r = draw();
            EXPECT_LE(torus_distance(p, r), torus_distance(p, q) + torus_distance(q, r) + 1e-9);
            EXPECT_LE(torus_distance(p, q), std::sqrt(static_cast<double>(d)) / 2 + 1e-12);
            EXPECT_EQ(torus_distance(p, q) < torus_distance(p, r),
                      torus_distance_squared(p, q) < torus_distance_squared(p, r));
            EXPECT_EQ(torus_distance(p, q), torus_distance(q, p));
        }
    }
}

TEST(PointSet, ValidatesCoordinates)
{
    EXPECT_THROW(PointSet(2, {0.1, 0.2, 0.3}), std::domain_error);
    EXPECT_THROW(PointSet(1, {0.1, 1.5}), std::domain_error);
    const PointSet s{2, {0.1, 0.2, 0.3, 0.4}};
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.point(1), TorusPoint({0.3, 0.4}));
}
