#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "drillport/error.hpp"
#include "drillport/metrics.hpp"
#include "drillport/selection.hpp"
#include "oracles.hpp"

using namespace drillport;

TEST(Hypervolume, Examples) {
    const Point2 r{4, 4};
    EXPECT_DOUBLE_EQ(hypervolume(std::vector<Point2>{{4, 4}}, r), 0.0);
    EXPECT_DOUBLE_EQ(hypervolume(std::vector<Point2>{{2, 2}}, r), 4.0);
    const std::vector<Point2> stair{{1, 3}, {2, 2}, {3, 1}};
    EXPECT_DOUBLE_EQ(hypervolume(stair, r), 6.0);
    EXPECT_NEAR(oracle::mc_hypervolume(stair, {0, 0}, r, 1000000, 1), 6.0, 0.06);
}

TEST(Hypervolume, IgnoresDominatedAndOutsidePoints) {
    const Point2 r{4, 4};
    const std::vector<Point2> pts{{1, 3}, {2, 2}, {3, 1}, {3, 3}, {5, 0}, {0, 4}};
    EXPECT_DOUBLE_EQ(hypervolume(pts, r), 6.0);
}

TEST(Hypervolume, RandomFrontsAgreeWithMonteCarlo) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point2> pts;
        for (int i = 0; i < 15; ++i) pts.push_back({u(rng), u(rng)});
        const Point2 r{1.1, 1.1};
        const double exact = hypervolume(pts, r);
        const double mc = oracle::mc_hypervolume(pts, {0, 0}, r, 400000, rng());
        EXPECT_NEAR(mc, exact, 0.01 * exact + 1e-3);
    }
}

TEST(Igd, Examples) {
    const std::vector<Point2> star{{0, 0}, {1, 1}};
    EXPECT_DOUBLE_EQ(igd(star, star), 0.0);
    EXPECT_NEAR(igd(std::vector<Point2>{{0, 0}}, star), std::sqrt(2.0) / 2.0, 1e-12);
    EXPECT_THROW(igd(std::vector<Point2>{}, star), InputError);
}

TEST(Spacing, Examples) {
    EXPECT_DOUBLE_EQ(spacing(std::vector<Point2>{{0, 0}, {1, 5}}), 0.0);
    EXPECT_DOUBLE_EQ(spacing(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}), 0.0);
    EXPECT_NEAR(spacing(std::vector<Point2>{{0, 0}, {1, 0}, {3, 0}}), std::sqrt(1.0 / 3.0),
                1e-12);
    EXPECT_THROW(spacing(std::vector<Point2>{{0, 0}}), InputError);
}

TEST(Coverage, Examples) {
    const std::vector<Point2> a{{0, 0}}, b{{1, 1}};
    EXPECT_EQ(set_coverage(a, b), 1.0);
    EXPECT_EQ(set_coverage(b, a), 0.0);
    const std::vector<Point2> s{{0, 2}, {2, 0}};
    EXPECT_EQ(set_coverage(s, s), 0.0);
    const std::vector<Point2> bb{{1, 1}, {3, 3}};
    EXPECT_EQ(set_coverage(s, bb), 0.5);
    EXPECT_FALSE(set_coverage(s, std::vector<Point2>{}).has_value());
}

TEST(ReferencePoint, UnionRule) {
    const std::vector<std::vector<Point2>> sets{{{0, 10}, {10, 0}}, {{5, 5}}};
    const auto r = reference_point(sets, 0.1);
    EXPECT_DOUBLE_EQ(r.f1, 11.0);
    EXPECT_DOUBLE_EQ(r.f2, 11.0);
    const std::vector<std::vector<Point2>> flat{{{2, 3}}};
    const auto q = reference_point(flat, 0.1);
    EXPECT_DOUBLE_EQ(q.f1, 2.0 + 0.2);
    EXPECT_DOUBLE_EQ(q.f2, 3.0 + 0.3);
}

TEST(MetricTable, SelfComparison) {
    const std::vector<Point2> f{{0, 3}, {1, 1}, {3, 0}};
    const auto t = compute_metric_table({"a", "b"}, {f, f});
    EXPECT_DOUBLE_EQ(t.igd[0], 0.0);
    EXPECT_DOUBLE_EQ(t.hv[0], t.hv[1]);
    EXPECT_FALSE(t.coverage[0][0].has_value());
    EXPECT_EQ(t.coverage[0][1], 0.0);
}

TEST(Selection, IdealPoint) {
    const std::vector<Point2> one{{3, 7}};
    EXPECT_EQ(ideal_point_select(one).index, 0U);
    const std::vector<Point2> f{{0, 1}, {0.5, 0.5}, {1, 0}};
    const auto c = ideal_point_select(f);
    EXPECT_EQ(c.index, 1U);
    EXPECT_NEAR(c.score, std::sqrt(0.5), 1e-12);
    const std::vector<Point2> corner{{0, 1}, {0, 0}, {1, 0}};
    EXPECT_EQ(ideal_point_select(corner).index, 1U);
}

TEST(Selection, Knee) {
    const std::vector<Point2> f{{0, 1}, {0.2, 0.2}, {1, 0}};
    const auto c = knee_select(f);
    EXPECT_EQ(c.index, 1U);
    EXPECT_NEAR(c.score, 0.6 / std::sqrt(2.0), 1e-12);
    EXPECT_FALSE(c.fallback);
    const std::vector<Point2> line{{0, 1}, {0.5, 0.5}, {1, 0}};
    EXPECT_TRUE(knee_select(line).fallback);
    const std::vector<Point2> bowed{{0, 1}, {0.1, 0.45}, {0.25, 0.25}, {0.45, 0.1}, {1, 0}};
    EXPECT_EQ(knee_select(bowed).index, 2U);
}

TEST(Selection, HvContribution) {
    const Point2 r{4, 4};
    const std::vector<Point2> f{{1, 3}, {2, 2}, {3, 1}};
    const auto contrib = hv_contributions(f, r);
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::vector<Point2> rest;
        for (std::size_t j = 0; j < f.size(); ++j)
            if (j != i) rest.push_back(f[j]);
        EXPECT_DOUBLE_EQ(contrib[i], hypervolume(f, r) - hypervolume(rest, r));
    }
    EXPECT_EQ(hv_contribution_select(f, r).index, 2U);
    const std::vector<Point2> single{{1, 1}};
    const auto s = hv_contribution_select(single, r);
    EXPECT_EQ(s.index, 0U);
    EXPECT_DOUBLE_EQ(s.score, 9.0);
    const std::vector<Point2> deep{{0, 3.5}, {1, 1}, {3.5, 0}};
    EXPECT_EQ(hv_contribution_select(deep, r).index, 1U);
}

TEST(Selection, Stratify) {
    const std::vector<Point2> same{{0, 1}, {1, 1}, {2, 1}};
    const auto t0 = stratify_by_risk(same, 3);
    EXPECT_EQ(t0[0].size(), 3U);
    const std::vector<Point2> spread{{2, 0}, {1, 0.5}, {0, 1}};
    const auto t = stratify_by_risk(spread, 3);
    ASSERT_EQ(t.size(), 3U);
    EXPECT_EQ(t[0], std::vector<std::size_t>{0});
    EXPECT_EQ(t[1], std::vector<std::size_t>{1});
    EXPECT_EQ(t[2], std::vector<std::size_t>{2});
    const auto one = stratify_by_risk(spread, 1);
    EXPECT_EQ(one[0].size(), 3U);
    EXPECT_EQ(parse_selection_method("hv"), SelectionMethod::HvContribution);
    EXPECT_THROW(parse_selection_method("median"), InputError);
}
