#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bergman/error.hpp"
#include "bergman/measure.hpp"
#include "oracles.hpp"

using namespace bergman;

namespace {

constexpr double pi = std::numbers::pi;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

}  // namespace

TEST(AlphaMeasure, ClosedForms) {
    EXPECT_DOUBLE_EQ(alpha_measure_box(Interval(0, 1), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(alpha_measure_box(Interval(0, 2), 1.0), 4.0);
    EXPECT_DOUBLE_EQ(alpha_measure_tent(Interval(0, 1), 0.0), 0.5);
    EXPECT_DOUBLE_EQ(alpha_measure_tent(Interval(0, 1), 1.0), 3.0 / 8.0);
    EXPECT_THROW(alpha_measure_box(Interval(0, 1), -1.0), DomainError);
    EXPECT_THROW(alpha_measure_tent(Interval(0, 1), -2.0), DomainError);
}

TEST(AlphaMeasure, BoxTentRatio) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ul(-10, 10), uL(0.01, 10), ua(-0.99, 5);
    for (int i = 0; i < 200; ++i) {
        Interval I(ul(rng), uL(rng));
        const double a = ua(rng);
        const double ratio = alpha_measure_box(I, a) / alpha_measure_tent(I, a);
        EXPECT_NEAR(ratio, 1.0 / (1.0 - std::pow(2.0, -(1.0 + a))), 1e-13 * ratio);
    }
}

TEST(WeightedRegionMeasure, ConstantWeightMatchesClosedForm) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ul(-20, 20), uL(0.05, 20), ua(-0.9, 3);
    QuadratureConfig qc;
    for (int i = 0; i < 100; ++i) {
        Interval I(ul(rng), uL(rng));
        const double a = ua(rng);
        auto r = weighted_region_measure(CarlesonBox(I), SymbolicFunction(), a, qc);
        const double exact = alpha_measure_box(I, a);
        EXPECT_NEAR(r.value, exact, qc.tolerance * exact);
        auto t = weighted_region_measure(Tent(I), SymbolicFunction(), a, qc);
        EXPECT_NEAR(t.value, alpha_measure_tent(I, a), qc.tolerance * exact);
    }
}

TEST(WeightedRegionMeasure, TentWithQuadraticWeight) {
    auto r = weighted_region_measure(Tent(Interval(0, 1)), SymbolicFunction::parse("ypow(2)"), 0.0, {});
    EXPECT_NEAR(r.value, 7.0 / 24.0, 1e-12);
}

TEST(WeightedRegionMeasure, SingularPowerAgainstRadialReference) {
    const double delta = 0.5;
    auto r = weighted_region_measure(CarlesonBox(Interval(-1, 2)),
                                     SymbolicFunction(PowerOfModulus{delta - 2.0}), 0.0, {});
    // In polar coordinates the radial integral is rho_max^delta / delta, with
    // rho_max(theta) = min(1 / |cos theta|, 2 / sin theta) on Q_[-1,1).
    auto radial = [&](double th) {
        const double rmax = std::min(1.0 / std::fabs(std::cos(th)), 2.0 / std::sin(th));
        return std::pow(rmax, delta) / delta;
    };
    const double c = std::atan2(2.0, 1.0);
    const double ref = oracle::gk(radial, 0, c) + oracle::gk(radial, c, pi - c) + oracle::gk(radial, pi - c, pi);
    EXPECT_NEAR(r.value, ref, 1e-9 * ref);
}

TEST(IntegrateMonomial, OffOriginRectAgainstReference) {
    const double s = -2.7, t = -0.4;
    auto q = integrate_monomial(s, t, Rect{0.5, 2, 0, 1.5}, std::nullopt, 1e-12);
    auto f = [&](double x, double y) { return std::pow(std::hypot(x, y), s) * std::pow(y, t); };
    EXPECT_NEAR(q.value, oracle::rect(f, 0.5, 2, 0, 1.5), 1e-8 * q.value);
    auto capped = integrate_monomial(s, t, Rect{-0.5, 2, 0.2, 1.5}, 1.3, 1e-12);
    auto inner = [&](double y) {
        const double h = std::sqrt(1.3 * 1.3 - y * y);
        return oracle::ts([&](double x) { return f(x, y); }, std::max(-0.5, -h), h, 1e-10);
    };
    EXPECT_NEAR(capped.value, oracle::ts(inner, 0.2, 1.3, 1e-10), 1e-8 * capped.value);
}

TEST(IntegrateMonomial, Divergence) {
    EXPECT_THROW(integrate_monomial(-2.0, 0.0, Rect{-1, 1, 0, 1}, std::nullopt, 1e-10), DivergenceError);
    EXPECT_THROW(integrate_monomial(0.0, -1.0, Rect{2, 3, 0, 1}, std::nullopt, 1e-10), DivergenceError);
    EXPECT_THROW(integrate_monomial(1.0, 0.0, std::nullopt, std::nullopt, 1e-10), DivergenceError);
    EXPECT_NO_THROW(integrate_monomial(-2.0, 0.0, Rect{1, 2, 0, 1}, std::nullopt, 1e-10));
}

TEST(IntegrateFunction, KernelTimesBoxAgainstReference) {
    auto f = SymbolicFunction::parse("kern(0.5,3)*box(-1,2)*modpow(-0.5)").normal_form();
    const double nu = 0.5;
    auto r = integrate_function(f, nu, {});
    auto g = [&](double x, double y) { return f.evaluate(x, y) * std::pow(y, nu); };
    const double ref = oracle::rect(g, -1, 0, 0, 2) + oracle::rect(g, 0, 1, 0, 2);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, ref, 1e-7 * ref);
}

TEST(LpNorm, ShiftedKernelClosedForm) {
    // integral over H of |z + i|^{-4} is pi / 4
    QuadratureConfig qc;
    const double N = lp_norm(SymbolicFunction(ShiftedKernelPower{1.0, 2.0}), 2.0, 0.0, qc);
    EXPECT_NEAR(N, std::sqrt(pi / 4.0), 1e-8);
    const double N2 = lp_norm(SymbolicFunction(ShiftedKernelPower{2.0, 2.0}), 2.0, 0.0, qc);
    EXPECT_NEAR(N2 * N2 / (N * N), 0.25, 0.02 * 0.25);
    EXPECT_NEAR(N2 * N2 / (N * N), 0.25, 1e-8);
}

TEST(LpNorm, BoxIndicator) {
    EXPECT_NEAR(lp_norm(SymbolicFunction(BoxIndicator{Interval(0, 1)}), 3.0, 0.0, {}), 1.0, 1e-14);
}

TEST(LpNorm, ShiftedKernelScalingInT) {
    for (auto [p, nu, gamma] : {std::tuple{2.0, 0.0, 2.0}, {2.0, 1.0, 2.0}, {3.0, 0.5, 1.5}}) {
        std::vector<double> ts{0.5, 1.0, 2.0, 4.0, 8.0}, vals;
        for (double t : ts) vals.push_back(std::pow(lp_norm(SymbolicFunction(ShiftedKernelPower{t, gamma}), p, nu, {}), p));
        EXPECT_NEAR(slope(ts, vals), -p * gamma + nu + 2.0, 1e-6);
    }
}

TEST(LpNorm, SharpnessFunctionScaling) {
    // f omega = |z|^{delta-2} 1_{|z|<=1} |z|^{(2-delta)/p'} with p = 2: ||.||_2^2 = pi / delta
    std::vector<double> inv, norms;
    for (double d : {0.4, 0.2, 0.1, 0.05}) {
        SymbolicFunction f = SymbolicFunction(TruncatedPower{d - 2.0, 1.0}) *
                             SymbolicFunction(PowerOfModulus{(2.0 - d) / 2.0});
        const double n = lp_norm(f, 2.0, 0.0, {});
        EXPECT_NEAR(n * n, pi / d, 1e-12 * pi / d);
        inv.push_back(1.0 / d);
        norms.push_back(n);
    }
    EXPECT_NEAR(slope(inv, norms), 0.5, 1e-12);
}

TEST(LpNorm, Divergence) {
    EXPECT_THROW(lp_norm(SymbolicFunction(ShiftedKernelPower{1.0, 1.0}), 2.0, 0.0, {}), DivergenceError);
    EXPECT_THROW(lp_norm(SymbolicFunction(PowerOfModulus{-1.0}), 2.0, 0.0, {}), DivergenceError);
    EXPECT_THROW(lp_norm(SymbolicFunction(TruncatedPower{-1.0, 1.0}), 2.0, 0.0, {}), DivergenceError);
    EXPECT_THROW(lp_norm(SymbolicFunction(), 0.5, 0.0, {}), InputError);
}
