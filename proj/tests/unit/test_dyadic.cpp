#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"

using namespace bergman;

namespace {

constexpr double third = 1.0 / 3.0;

SymbolicFunction box(double left, double length) { return SymbolicFunction(BoxIndicator{Interval(left, length)}); }

}  // namespace

TEST(Dyadic, IntervalOf) {
    EXPECT_EQ(interval_of({0, 3, 0.0}), Interval(3, 1));
    const Interval a = interval_of({1, 0, third});
    EXPECT_DOUBLE_EQ(a.left(), -2.0 / 3.0);
    EXPECT_DOUBLE_EQ(a.right(), 4.0 / 3.0);
    const Interval b = interval_of({-1, 0, third});
    EXPECT_DOUBLE_EQ(b.left(), -1.0 / 6.0);
    EXPECT_DOUBLE_EQ(b.right(), 1.0 / 3.0);
}

TEST(Dyadic, GridMembersExamples) {
    TruncatedGrid g{0.0, 0, 1};
    auto m = grid_members(g, {0, 2, 0, 2});
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(interval_of(m[0]), Interval(0, 1));
    EXPECT_EQ(interval_of(m[1]), Interval(1, 1));
    EXPECT_EQ(interval_of(m[2]), Interval(0, 2));
    TruncatedGrid h{third, 0, 0};
    auto n = grid_members(h, {0, 1, 0, 1});
    ASSERT_EQ(n.size(), 2u);
    EXPECT_EQ(n[0].m, -1);
    EXPECT_EQ(n[1].m, 0);
    EXPECT_TRUE(grid_members(g, {0, 1, 5, 6}).empty());
    EXPECT_THROW(grid_members(TruncatedGrid{0.5}, {0, 1, 0, 1}), InputError);
}

TEST(Dyadic, GridMembersMatchBruteForce) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-5, 5), uw(0.01, 4), uy(0, 3);
    for (double beta : {0.0, third}) {
        TruncatedGrid g{beta, -3, 2, Interval(-6, 12)};
        for (int t = 0; t < 30; ++t) {
            const double x0 = ux(rng), y0 = uy(rng);
            const Rect r{x0, x0 + uw(rng), y0, y0 + uw(rng)};
            std::vector<DyadicIndex> brute;
            for (int j = g.j_min; j <= g.j_max; ++j) {
                for (std::int64_t m = -200; m <= 200; ++m) {
                    DyadicIndex idx{j, m, beta};
                    const Interval I = interval_of(idx);
                    const bool in_bound = I.left() < g.bound.right() && I.right() > g.bound.left();
                    const bool hit = I.left() < r.x1 && I.right() > r.x0 && r.y0 < I.length() &&
                                     std::max(r.x0, g.bound.left()) < std::min(r.x1, g.bound.right()) &&
                                     I.left() < std::min(r.x1, g.bound.right()) &&
                                     I.right() > std::max(r.x0, g.bound.left());
                    if (in_bound && hit) brute.push_back(idx);
                }
            }
            EXPECT_EQ(grid_members(g, r), brute);
        }
    }
}

TEST(Dyadic, NestedOrDisjoint) {
    for (double beta : {0.0, third}) {
        TruncatedGrid g{beta, -4, 3, Interval(-8, 16)};
        auto all = grid_members(g, {-8, 8, 0, 8});
        for (std::size_t i = 0; i < all.size(); ++i) {
            const Interval A = interval_of(all[i]);
            for (std::size_t k = i + 1; k < all.size(); ++k) {
                const Interval B = interval_of(all[k]);
                // endpoints of the shifted grid carry one rounding of 1/3
                const double e = 4 * std::numeric_limits<double>::epsilon() * 16;
                const bool disjoint = A.right() <= B.left() + e || B.right() <= A.left() + e;
                const bool nested = (A.left() >= B.left() - e && A.right() <= B.right() + e) ||
                                    (B.left() >= A.left() - e && B.right() <= A.right() + e);
                ASSERT_TRUE(disjoint || nested) << to_string(A) << " " << to_string(B);
                if (all[i].j == all[k].j) ASSERT_TRUE(disjoint);
            }
        }
    }
}

TEST(Dyadic, GeometricSeriesValues) {
    TruncatedGrid g{0.0, -14, 30};
    const HalfPlanePoint z(0.5, 0.5);
    double s0 = 0, s1 = 0;
    for (int k = 30; k >= 0; --k) {
        s0 += std::pow(4.0, -k);
        s1 += std::pow(2.0, -k);
    }
    auto r0 = dyadic_model_apply(box(0, 1), {2, 2, 0, 0}, g, z);
    auto r1 = dyadic_model_apply(box(0, 1), {2, 2, 0, 1}, g, z);
    EXPECT_EQ(r0.boxes, 31u);
    EXPECT_NEAR(r0.value, s0, 1e-14);
    EXPECT_NEAR(r1.value, s1, 1e-14);
    EXPECT_NEAR(r0.value, 4.0 / 3.0, 1e-6);
    EXPECT_NEAR(r1.value, 2.0, 1e-6);
    auto none = dyadic_model_apply(box(0, 1), {2, 2, 0, 0}, TruncatedGrid{}, HalfPlanePoint(0.5, 1000));
    EXPECT_EQ(none.boxes, 0u);
    EXPECT_EQ(none.value, 0.0);
}

TEST(Dyadic, ApplyMatchesDirectSumForPowers) {
    // f = y^{1/2} on boxes: <f, 1_Q>_0 = |I| (2/3) |I|^{3/2}
    TruncatedGrid g{third, -6, 5};
    ExponentConfig cfg{2, 2, 0.0, 0.5};
    DyadicModel model(SymbolicFunction(PowerOfHeight{0.5}), cfg, g);
    const HalfPlanePoint z(0.3, 0.05);
    double expect = 0;
    for (const auto& idx : containing_boxes(g, z)) {
        const double L = interval_of(idx).length();
        expect += std::pow(L, cfg.a - 2) * L * std::pow(L, 1.5) / 1.5;
    }
    EXPECT_NEAR(model.apply(z).value, expect, 1e-12 * expect);
}

TEST(Dyadic, SelfAdjoint) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ul(-3, 3), uL(0.05, 3), ua(0, 1.5);
    for (int t = 0; t < 6; ++t) {
        const double beta = t % 2 ? third : 0.0;
        TruncatedGrid g{beta, -8, 4};
        ExponentConfig cfg{2, 2, 0.5 * t - 0.5, ua(rng)};
        const auto f = box(ul(rng), uL(rng));
        const auto h = box(ul(rng), uL(rng));
        const double lhs = DyadicModel(f, cfg, g).pairing(h);
        const double rhs = DyadicModel(h, cfg, g).pairing(f);
        EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(std::fabs(lhs), 1.0));
    }
}

TEST(Dyadic, PairingMatchesBoxExpansion) {
    TruncatedGrid g{0.0, -5, 3};
    ExponentConfig cfg{2, 2, 0.0, 0.5};
    const auto f = box(0.1, 0.7);
    const auto h = box(-0.4, 1.3);
    DyadicModel mf(f, cfg, g);
    DyadicModel mh(h, ExponentConfig{2, 2, 0.0, 0.0}, g);
    // <Qf, h> = sum_I c_I(f) <h, 1_{Q_I}>
    double expect = 0;
    for (const auto& idx : grid_members(g, {-0.4, 0.9, 0, 1.3})) {
        const double L = interval_of(idx).length();
        expect += mf.coefficient(idx) * mh.coefficient(idx) * std::pow(L, 2.0);
    }
    EXPECT_NEAR(mf.pairing(h), expect, 1e-12 * expect);
}

TEST(Dyadic, FractionalMaximal) {
    TruncatedGrid g{0.0, -6, 6};
    SymbolicFunction one;
    const HalfPlanePoint z(0.5, 0.5);
    EXPECT_NEAR(fractional_maximal(box(0, 1), one, {2, 2, 0, 0}, g, z), 1.0, 1e-14);
    EXPECT_NEAR(fractional_maximal(SymbolicFunction::constant(2.5), one, {2, 2, 0, 0}, g, z), 2.5, 1e-12);
    double expect = 0;
    for (int k = 0; k <= 6; ++k) expect = std::max(expect, std::pow(4.0, -0.5 * k));
    EXPECT_NEAR(fractional_maximal(box(0, 1), one, {2, 2, 0, 1}, g, z), expect, 1e-14);
    EXPECT_EQ(fractional_maximal(box(0, 1), one, {2, 2, 0, 0}, g, HalfPlanePoint(0, 500)), 0.0);
    EXPECT_THROW(fractional_maximal(box(0, 1), SymbolicFunction::constant(0), {2, 2, 0, 0}, g, z),
                 DegenerateAverageError);
}

TEST(Dyadic, TentTiling) {
    TruncatedGrid g{0.0, -6, 3};
    auto in_tents = [&](double x, double y) {
        std::vector<Interval> hits;
        for (const auto& idx : grid_members(g, {x, std::nextafter(x, INFINITY), y, std::nextafter(y, INFINITY)})) {
            if (Tent(interval_of(idx)).contains(HalfPlanePoint(x, y))) hits.push_back(interval_of(idx));
        }
        return hits;
    };
    EXPECT_EQ(in_tents(0.3, 0.6), std::vector<Interval>{Interval(0, 1)});
    EXPECT_EQ(in_tents(0.3, 0.4), std::vector<Interval>{Interval(0, 0.5)});
    EXPECT_EQ(in_tents(0.3, 0.5), std::vector<Interval>{Interval(0, 1)});
    for (double beta : {0.0, third}) {
        TruncatedGrid h{beta, -6, 3};
        auto rep = tent_tiling_check(h, {-4, 4, 1.0 / 64, 8}, 10000);
        EXPECT_EQ(rep.samples, 10000u);
        EXPECT_EQ(rep.violations, 0u);
    }
    EXPECT_THROW(tent_tiling_check(g, {0, 1, 0.001, 1}, 10), InputError);
}
