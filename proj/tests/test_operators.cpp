#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "drillport/error.hpp"
#include "drillport/operators.hpp"
#include "oracles.hpp"

using namespace drillport;

namespace {

Project make(std::string id, std::string region, double npv, double pos, int wells,
             bool mandatory = false) {
    Project p;
    p.id = std::move(id);
    p.region = std::move(region);
    p.npv = npv;
    p.pos = pos;
    p.cost = 10.0;
    p.well_count = wells;
    p.mandatory = mandatory;
    return p;
}

Problem flat_problem(std::size_t n, long target) {
    std::vector<Project> ps;
    for (std::size_t i = 0; i < n; ++i) ps.push_back(make("P" + std::to_string(i), "A", 100, 0.5, 1));
    PlanTargets t;
    t.tot_wells = target;
    return {ps, t};
}

} // namespace

TEST(Normalize, Examples) {
    const std::vector<double> u{1, 2, 3};
    const auto v = minmax_normalize(u, 1e-9);
    EXPECT_NEAR(v[0], 0.0, 1e-12);
    EXPECT_NEAR(v[1], 0.5, 1e-9);
    EXPECT_NEAR(v[2], 1.0, 1e-9);
    const std::vector<double> same{4, 4, 4};
    for (double x : minmax_normalize(same, 1e-9)) EXPECT_DOUBLE_EQ(x, 0.0);
    const std::vector<double> one{7};
    EXPECT_EQ(minmax_normalize(one, 1e-9), std::vector<double>{0.0});
}

TEST(RegionBias, Examples) {
    EXPECT_DOUBLE_EQ(region_bias(2, 2, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(region_bias(2, 5, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(region_bias(2, 0, 0.3), 0.6);
    EXPECT_DOUBLE_EQ(region_bias(4, 0, 0.0), 0.0);
}

TEST(Direction, ScoresAndFlipGain) {
    auto s = direction_scores(0.8, 0.2, 0.0, 0.0, 0.5, 1.3);
    EXPECT_NEAR(s.up, 0.27, 1e-12);
    EXPECT_DOUBLE_EQ(flip_gain(0, s), s.up);
    s = direction_scores(0.0, 0.0, 0.5, 0.0, 0.5, 1.3);
    EXPECT_NEAR(s.down, -0.325, 1e-12);
    EXPECT_NEAR(flip_gain(1, s), 0.325, 1e-12);
    s = direction_scores(0.6, 0.9, 0.9, 0.1, 1.0, 1.3);
    EXPECT_DOUBLE_EQ(s.up, 0.7);
    EXPECT_DOUBLE_EQ(flip_gain(1, s), 0.6);
}

TEST(Budget, Examples) {
    EXPECT_EQ(mutation_budget(30, 0.05, 1), 2U);
    EXPECT_EQ(mutation_budget(10, 0.05, 1), 1U);
    EXPECT_EQ(mutation_budget(10, 0.0, 3), 3U);
}

TEST(Repair, IdentityWhenOnTarget) {
    Bits z{1, 0, 1};
    const std::vector<int> w{1, 1, 1};
    const std::vector<std::uint8_t> m{0, 0, 0};
    const std::vector<std::size_t> pool{0, 1, 2};
    const std::vector<double> b{0.1, 0.2, 0.3};
    const auto r = greedy_well_repair(z, w, m, pool, b, b, 2);
    EXPECT_TRUE(r.reached);
    EXPECT_EQ(z, (Bits{1, 0, 1}));
}

TEST(Repair, AddsHighestUnitBenefit) {
    Bits z{0, 0, 0};
    const std::vector<int> w{1, 1, 1};
    const std::vector<std::uint8_t> m{0, 0, 0};
    const std::vector<std::size_t> pool{0, 1, 2};
    const std::vector<double> add{0.9, 0.5, 0.1};
    const auto r = greedy_well_repair(z, w, m, pool, add, add, 2);
    EXPECT_TRUE(r.reached);
    EXPECT_EQ(z, (Bits{1, 1, 0}));
}

TEST(Repair, RemovesSoleNonMandatory) {
    Bits z{1, 1};
    const std::vector<int> w{1, 1};
    const std::vector<std::uint8_t> m{1, 0};
    const std::vector<std::size_t> pool{0, 1};
    const std::vector<double> b{0.0, 0.0};
    const auto r = greedy_well_repair(z, w, m, pool, b, b, 1);
    EXPECT_TRUE(r.reached);
    EXPECT_EQ(z, (Bits{1, 0}));
}

TEST(Repair, UnreachableIsFlagged) {
    Bits z{0, 0};
    const std::vector<int> w{1, 1};
    const std::vector<std::uint8_t> m{0, 0};
    const std::vector<std::size_t> pool{0};
    const std::vector<double> b{1.0};
    const auto r = greedy_well_repair(z, w, m, pool, b, b, 2);
    EXPECT_FALSE(r.reached);
    EXPECT_EQ(r.deficit, 1);
    EXPECT_EQ(z, (Bits{1, 0}));
}

TEST(Repair, UnitBenefitTiesGoToLowerIndex) {
    Bits z{0, 0, 0};
    const std::vector<int> w{2, 1, 1};
    const std::vector<std::uint8_t> m{0, 0, 0};
    const std::vector<std::size_t> pool{0, 1, 2};
    const std::vector<double> add{1.0, 0.5, 0.5};
    greedy_well_repair(z, w, m, pool, add, add, 1);
    EXPECT_EQ(z, (Bits{0, 1, 0}));
}

TEST(Crossover, IdenticalParentsReturnParent) {
    const auto problem = flat_problem(6, 3);
    const Bits a{1, 0, 1, 0, 1, 0};
    Rng rng(1);
    const auto [c1, c2] = dc_crossover(a, a, problem, {}, rng);
    EXPECT_EQ(c1.bits, a);
    EXPECT_EQ(c2.bits, a);
}

TEST(Crossover, SingleDifferingLocusFollowsDecisionRule) {
    // One differing locus with zero-well projects so repair never acts.
    std::vector<Project> ps{make("A", "R", 100, 0.5, 1), make("B", "R", 300, 0.5, 0)};
    PlanTargets t;
    t.tot_wells = 1;
    const Problem problem(ps, t);
    const Bits a{1, 0}, b{1, 1};
    // On D = {1}: g_hat = 0, d_hat = 0, so up = b = 0 and down = 0; up >= down.
    const auto child = dc_offspring(a, b, 0.4, problem, {});
    EXPECT_EQ(child.bits, (Bits{1, 1}));
    EXPECT_TRUE(child.repaired);
}

TEST(Crossover, DegenerateParamsSelectAllDifferingLoci) {
    const auto problem = flat_problem(8, 8);
    OperatorParams p;
    p.gamma = 0.0;
    p.k_bias = 0.0;
    const Bits a{1, 0, 1, 0, 1, 0, 1, 0}, b{0, 1, 0, 1, 0, 1, 0, 1};
    const auto child = dc_offspring(a, b, 0.3, problem, p);
    EXPECT_EQ(child.bits, Bits(8, 1));
}

TEST(Crossover, LociOutsideDifferenceAreKeptWithoutRepair) {
    std::vector<Project> ps;
    for (int i = 0; i < 6; ++i) ps.push_back(make("P" + std::to_string(i), "A", 100 + 50 * i, 0.5, 0));
    PlanTargets t;
    t.tot_wells = 1;
    ps[0].well_count = 1;
    const Problem problem(ps, t);
    const Bits a{1, 1, 0, 1, 0, 0}, b{1, 0, 1, 1, 1, 0};
    const auto child = dc_offspring(a, b, 0.7, problem, {});
    EXPECT_EQ(child.bits[0], 1);
    EXPECT_EQ(child.bits[3], 1);
    EXPECT_EQ(child.bits[5], 0);
}

TEST(Crossover, PropertyMandatoryAndWellCount) {
    std::mt19937_64 gen(99);
    int repaired = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto [ps, t] = oracle::random_instance(14, gen());
        const Problem problem(ps, t);
        Rng rng(gen());
        Bits a(14), b(14);
        for (auto& x : a) x = rng() & 1U;
        for (auto& x : b) x = rng() & 1U;
        problem.enforce_mandatory(a);
        problem.enforce_mandatory(b);
        const auto [c1, c2] = dc_crossover(a, b, problem, {}, rng);
        for (const auto* c : {&c1, &c2}) {
            ASSERT_EQ(c->bits.size(), 14U);
            for (std::size_t i = 0; i < 14; ++i) {
                if (problem.mandatory()[i]) ASSERT_EQ(c->bits[i], 1);
            }
            if (c->repaired) {
                ++repaired;
                ASSERT_EQ(problem.well_sum(c->bits), t.tot_wells);
            }
        }
    }
    EXPECT_GT(repaired, 0);
}

TEST(Crossover, LengthMismatchIsInputError) {
    const auto problem = flat_problem(4, 2);
    EXPECT_THROW(dc_offspring(Bits(4), Bits(3), 0.5, problem, {}), InputError);
}

TEST(Mutation, AllEqualGainFlipsLowestIndex) {
    // Zero-well projects and a selection already on target: the only change
    // is the flip itself.
    std::vector<Project> ps{make("M", "A", 100, 0.5, 1, true)};
    for (int i = 0; i < 4; ++i) ps.push_back(make("Z" + std::to_string(i), "A", 100, 0.5, 0));
    PlanTargets t;
    t.tot_wells = 1;
    const Problem problem(ps, t);
    OperatorParams p;
    p.beta = 0.0;
    p.l_min = 1;
    const auto child = sam_mutation(Bits{1, 0, 0, 0, 0}, 0.5, problem, p);
    EXPECT_EQ(child.bits, (Bits{1, 1, 0, 0, 0}));
}

TEST(Mutation, FlipsTopLByGain) {
    std::vector<Project> ps;
    for (int i = 0; i < 5; ++i) ps.push_back(make("Z" + std::to_string(i), "A", 100.0 * (i + 1), 1.0, 0));
    ps.push_back(make("W", "A", 1, 1.0, 1, true));
    PlanTargets t;
    t.tot_wells = 1;
    const Problem problem(ps, t);
    OperatorParams p;
    p.beta = 0.0;
    p.l_min = 2;
    // rho = 1: gain is g_hat for both states, so the two largest npv flip.
    const auto child = sam_mutation(Bits{0, 0, 0, 1, 0, 1}, 1.0, problem, p);
    EXPECT_EQ(child.bits, (Bits{0, 0, 0, 0, 1, 1}));
}

TEST(Mutation, PropertyPreservesInvariants) {
    std::mt19937_64 gen(5);
    int repaired = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto [ps, t] = oracle::random_instance(12, gen());
        const Problem problem(ps, t);
        Rng rng(gen());
        Bits x(12);
        for (auto& v : x) v = rng() & 1U;
        problem.enforce_mandatory(x);
        const auto c = sam_mutation(x, problem, {}, rng);
        ASSERT_EQ(c.bits.size(), 12U);
        for (std::size_t i = 0; i < 12; ++i) {
            if (problem.mandatory()[i]) ASSERT_EQ(c.bits[i], 1);
        }
        if (c.repaired) {
            ++repaired;
            ASSERT_EQ(problem.well_sum(c.bits), t.tot_wells);
        }
    }
    EXPECT_GT(repaired, 950);
}

TEST(Mutation, SeededDeterminism) {
    auto [ps, t] = oracle::random_instance(12, 77);
    const Problem problem(ps, t);
    Bits x(12, 0);
    problem.enforce_mandatory(x);
    Rng r1(3), r2(3);
    EXPECT_EQ(sam_mutation(x, problem, {}, r1).bits, sam_mutation(x, problem, {}, r2).bits);
}

TEST(Params, Validation) {
    OperatorParams p;
    EXPECT_NO_THROW(p.validate());
    p.alpha = 0.0;
    EXPECT_THROW(p.validate(), InputError);
    p = {};
    p.beta = 1.5;
    EXPECT_THROW(p.validate(), InputError);
}
