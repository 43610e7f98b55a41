#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bergman/error.hpp"
#include "bergman/fit.hpp"
#include "bergman/schur.hpp"

using namespace bergman;

namespace {

// int_H v^e |w + i|^{-k} dA = B(1/2, (k-1)/2) B(e+1, k-e-2)
double kernel_integral_at_i(double e, double k) {
    auto lbeta = [](double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); };
    return std::exp(lbeta(0.5, 0.5 * (k - 1.0)) + lbeta(e + 1.0, k - e - 2.0));
}

OffDiagonalConfig random_config(std::mt19937_64& rng, bool admissible) {
    std::uniform_real_distribution<double> up(1.05, 5.0), uq(0.0, 4.0), ua(-0.95, 3.0), ud(0.02, 2.5);
    OffDiagonalConfig c;
    c.p = up(rng);
    c.q = c.p + uq(rng);
    c.alpha_src = ua(rng);
    c.beta_tgt = ua(rng);
    const double edge = (c.alpha_src + 1.0) / c.p - 1.0;  // admissible iff a > edge
    c.a = admissible ? edge + ud(rng) : edge - ud(rng);
    return c;
}

}  // namespace

TEST(Fit, Examples) {
    auto f = fit_loglog({{1, 1}, {2, 4}, {4, 16}});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.max_residual, 0.0, 1e-14);
    EXPECT_NEAR(fit_loglog({{1, 5}, {3, 5}, {9, 5}}).slope, 0.0, 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<std::pair<double, double>> pts;
    for (double x : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(x, std::pow(x, -1.5) * (1 + noise(rng)));
    EXPECT_NEAR(fit_loglog(pts).slope, -1.5, 0.05);
    EXPECT_THROW(fit_loglog({{1, 1}, {2, 2}}), InputError);
    EXPECT_THROW(fit_loglog({{1, 1}, {2, 2}, {2, 3}}), InputError);
}

TEST(Schur, ConfigAlgebra) {
    const OffDiagonalConfig c{2, 2, 0, 0, 0};
    EXPECT_DOUBLE_EQ(c.b(), 1.0);
    EXPECT_DOUBLE_EQ(c.omega_param(), -2.0);
    EXPECT_NEAR(c.omega_param(), c.a - c.b() - c.alpha_src - 1.0, 1e-15);
    const auto d = OffDiagonalConfig::with_default_target(2, 4, 0, 0);
    EXPECT_DOUBLE_EQ(d.beta_tgt, 2.0);
    EXPECT_DOUBLE_EQ(d.b(), 1.0);
    EXPECT_THROW((OffDiagonalConfig{2, 1.5, 0, 0, 0}).validate(), InputError);
}

TEST(Schur, Admissibility) {
    EXPECT_TRUE(admissibility({2, 2, 0, 0, 0}));
    EXPECT_FALSE(admissibility({2, 2, 0.5, 0, -0.6}));
    EXPECT_FALSE(admissibility({2, 2, 1.0, 0, 0.0}));  // 2 = 2(0 + 1)
}

TEST(Schur, WorkedExample) {
    const OffDiagonalConfig c{2, 2, 0, 0, 0};
    const auto sp = schur_parameters(c, 1.0 / 3.0, 1.0 / 6.0);
    EXPECT_NEAR(sp.t, 7.0 / 12.0, 1e-15);
    EXPECT_NEAR(sp.one_minus_t, 5.0 / 12.0, 1e-15);
    for (const auto& k : schur_constraints(c, sp)) EXPECT_GT(k.slack, 0.0) << k.name;
    const auto got = solve_rst(c);
    // the continuous max-min point is (1/3, 1/6) with slack 1/6
    EXPECT_NEAR(got.r, 1.0 / 3.0, 1.0 / 256);
    EXPECT_NEAR(got.s, 1.0 / 6.0, 1.0 / 256);
    EXPECT_EQ(got.t + got.one_minus_t, 1.0);
    EXPECT_THROW(solve_rst({2, 2, 0.5, 0, -0.6}), InfeasibleError);
}

TEST(Schur, FeasibilityCompleteness) {
    std::mt19937_64 rng(11);
    int skipped = 0;
    for (int i = 0; i < 200; ++i) {
        const auto c = random_config(rng, true);
        ASSERT_TRUE(admissibility(c));
        if (!schur_construction_feasible(c)) {
            EXPECT_THROW(solve_rst(c), InfeasibleError);
            ++skipped;
            continue;
        }
        SchurParameters sp;
        ASSERT_NO_THROW(sp = solve_rst(c)) << c.p << " " << c.q << " " << c.alpha_src << " " << c.a;
        for (const auto& k : schur_constraints(c, sp)) EXPECT_GT(k.slack, 0.0) << k.name;
        EXPECT_GT(sp.t, 0.0);
        EXPECT_LT(sp.t, 1.0);
        EXPECT_NEAR(sp.t + sp.one_minus_t, 1.0, 1e-14);
        EXPECT_NEAR(first_chain_defect(c, sp), 0.0, 1e-13);
        EXPECT_NEAR(second_chain_defect(c, sp), 0.0, 1e-13);
    }
    EXPECT_LT(skipped, 40);
    for (int i = 0; i < 200; ++i) {
        const auto c = random_config(rng, false);
        EXPECT_THROW(solve_rst(c), InfeasibleError);
    }
}

TEST(Schur, AdmissibleButNoPowerTestFunctions) {
    // a < alpha with a small target order: (1.4) holds, the power construction does not
    const OffDiagonalConfig c{2.8254897059155155, 5.431861596806567, 2.1654572369852776, -0.5792546322417721,
                              0.21062337322769956};
    EXPECT_TRUE(admissibility(c));
    EXPECT_FALSE(schur_construction_feasible(c));
    EXPECT_THROW(solve_rst(c), InfeasibleError);
    // close to the boundary of the extra condition on the feasible side
    OffDiagonalConfig d{2, 2, 1.0, 0.0, 0.6};
    EXPECT_TRUE(schur_construction_feasible(d));
    const auto sp = solve_rst(d);
    for (const auto& k : schur_constraints(d, sp)) EXPECT_GT(k.slack, 0.0) << k.name;
}

TEST(Schur, KernelIntegralClosedForm) {
    for (auto [e, k] : {std::pair{0.0, 3.0}, {-1.0 / 3.0, 7.0 / 3.0}, {-2.0 / 3.0, 5.0 / 3.0}, {0.5, 4.0}}) {
        const double got = height_kernel_integral(e, k, HalfPlanePoint(0, 1), {}).value();
        const double ref = kernel_integral_at_i(e, k);
        EXPECT_NEAR(got, ref, 1e-7 * ref) << e << " " << k;
    }
}

TEST(Schur, ConditionsConstantAcrossHeights) {
    const OffDiagonalConfig c{2, 2, 0, 0, 0};
    const auto sp = schur_parameters(c, 1.0 / 3.0, 1.0 / 6.0);
    std::vector<HalfPlanePoint> samples;
    for (int i = 0; i < 10; ++i) samples.emplace_back(0.3 * i - 1.0, std::pow(16.0, i / 9.0) / 4.0);
    const auto rep = verify_schur_conditions(c, sp, samples);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT(rep.first_spread, 0.02);
    EXPECT_LT(rep.second_spread, 0.02);
    // the constants are the closed-form integrals at z = i
    EXPECT_NEAR(rep.m1 * rep.m1, kernel_integral_at_i(-1.0 / 3.0, 7.0 / 3.0), 1e-6);
    EXPECT_NEAR(rep.m2 * rep.m2, kernel_integral_at_i(-2.0 / 3.0, 5.0 / 3.0), 1e-6);
}

TEST(Schur, BadParametersDiverge) {
    const OffDiagonalConfig c{2, 2, 0, 0, 0};
    const auto sp = schur_parameters(c, 0.6, 0.1);  // r >= (beta+1)/q
    EXPECT_THROW(verify_schur_conditions(c, sp, {HalfPlanePoint(0, 1)}), DivergenceError);
}

TEST(Schur, EndToEndBound) {
    const OffDiagonalConfig c{2, 2, 0, 0, 0};
    const auto sp = solve_rst(c);
    const auto rep = verify_schur_conditions(c, sp, {HalfPlanePoint(0, 0.5), HalfPlanePoint(1, 1), HalfPlanePoint(0, 2)});
    QuadratureConfig qc;
    qc.tolerance = 1e-5;
    for (const char* f : {"box(0,1)", "box(-2,3)", "trunc(-0.6,1)", "trunc(-0.9,1)"}) {
        const auto b = schur_bound(c, rep, SymbolicFunction::parse(f), qc);
        EXPECT_TRUE(b.converged) << f;
        EXPECT_LE(b.target, b.bound * (1 + 1e-4)) << f;
    }
}

TEST(Schur, LemmaScaling) {
    const std::vector<double> ts{0.5, 1, 2, 4};
    auto a = lemma_norm_scaling(2, 0, 2, ts);
    EXPECT_NEAR(a.fit.slope, -2.0, 0.02);
    EXPECT_NEAR(a.fit.slope, a.expected_slope, 1e-6);
    auto b = lemma_norm_scaling(2, 1, 2, ts);
    EXPECT_NEAR(b.fit.slope, -1.0, 0.01);
    EXPECT_THROW(lemma_norm_scaling(2, 0, 1, ts), DivergenceError);
    EXPECT_THROW(lemma_norm_scaling(2, -1, 3, ts), DivergenceError);
}
