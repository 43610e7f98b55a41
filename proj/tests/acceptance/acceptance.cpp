// Acceptance suite: one PASS/FAIL line per criterion.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"
#include "bergman/experiments.hpp"
#include "bergman/measure.hpp"
#include "bergman/operators.hpp"
#include "bergman/schur.hpp"
#include "bergman/weights.hpp"

using namespace bergman;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool within(double got, double want, double rel) { return std::fabs(got - want) <= rel * std::fabs(want); }

SymbolicFunction box(double left, double length) { return SymbolicFunction(BoxIndicator{Interval(left, length)}); }

// 1. ||((z + it)/i)^{-gamma}||_{p,nu}^p against t
Outcome lemma_scaling() {
    Outcome o{true, ""};
    const std::vector<double> ts{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    for (auto [p, nu, gamma] : {std::tuple{2.0, 0.0, 2.0}, {2.0, 1.0, 2.0}}) {
        const auto t0 = std::chrono::steady_clock::now();
        const LemmaScaling r = lemma_norm_scaling(p, nu, gamma, ts);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = within(r.fit.slope, r.expected_slope, 0.01) && secs < 30.0;
        o.pass = o.pass && ok;
        o.detail += fmt("(p=%g nu=%g gamma=%g) slope %.6f vs %.6f in %.2fs; ", p, nu, gamma, r.fit.slope,
                        r.expected_slope, secs);
    }
    return o;
}

Outcome sharpness(const ExponentConfig& cfg, double tol, double limit_secs) {
    SharpnessConfig sc;
    sc.cfg = cfg;
    sc.deltas = {0.4, 0.2, 0.1, 0.05};
    const auto t0 = std::chrono::steady_clock::now();
    const SharpnessResult r = sharpness_run(sc);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& row : r.rows) {
        if (!row.error.empty()) return {false, fmt("delta=%g failed: %s", row.delta, row.error.c_str())};
    }
    if (!r.weight_fit || !r.source_fit || !r.ratio_fit) return {false, "fewer than 3 rows, no fit"};
    const bool w = within(r.weight_fit->slope, r.expected_weight_slope, tol);
    const bool s = within(r.source_fit->slope, r.expected_source_slope, tol);
    const bool q = r.ratio_fit->slope >= 0.95 * r.expected_ratio_slope;
    return {w && s && q && secs < limit_secs,
            fmt("p=%g q=%g alpha=%g a=%g: weight slope %.4f (%.4f +-%g%%), source slope %.4f (%.4f), ratio slope "
                "%.4f (>= %.4f), %.0fs",
                cfg.p, cfg.q, cfg.alpha, cfg.a, r.weight_fit->slope, r.expected_weight_slope, 100 * tol,
                r.source_fit->slope, r.expected_source_slope, r.ratio_fit->slope, 0.95 * r.expected_ratio_slope,
                secs)};
}

// 4. S f <= C (Q^0 f + Q^{1/3} f)
Outcome domination() {
    const char* fs[] = {"box(0,1)", "trunc(-1.5,1)", "kern(1,3)"};
    DominationConfig dc;
    dc.samples = 200;
    dc.y_min = 0x1p-8;
    dc.y_max = 0x1p3;
    DominationConfig deep = dc;
    deep.grid.j_min = 2 * dc.grid.j_min;
    deep.grid.j_max = 2 * dc.grid.j_max;
    double lo = INFINITY, hi = 0.0, drift = 0.0;
    std::string detail;
    bool finite = true;
    for (const char* text : fs) {
        const auto f = SymbolicFunction::parse(text);
        const DominationResult r = domination_run(f, dc);
        const DominationResult d = domination_run(f, deep);
        finite = finite && std::isfinite(r.max_ratio) && r.min_ratio > 0.0;
        lo = std::min(lo, r.max_ratio);
        hi = std::max(hi, r.max_ratio);
        drift = std::max(drift, std::fabs(d.max_ratio / r.max_ratio - 1.0));
        detail += fmt("%s C=%.4g (deep %.4g, sample spread %.3g); ", text, r.max_ratio, d.max_ratio, r.spread);
    }
    return {finite && hi / lo < 10.0 && drift <= 0.10,
            detail + fmt("constants within x%.3g (< 10), depth drift %.2g%% (<= 10%%)", hi / lo, 100 * drift)};
}

// 5. <Qf, g> = <f, Qg>
Outcome self_adjoint() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ul(-4, 4), uL(0.05, 4), ua(0, 1.5), ual(-0.9, 2);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const TruncatedGrid g{i % 2 ? 1.0 / 3.0 : 0.0, -10, 5};
        const ExponentConfig cfg{2, 2, ual(rng), ua(rng)};
        const auto f = box(ul(rng), uL(rng));
        const auto h = box(ul(rng), uL(rng));
        const double lhs = DyadicModel(f, cfg, g).pairing(h);
        const double rhs = DyadicModel(h, cfg, g).pairing(f);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(lhs), 1.0));
    }
    return {worst <= 1e-8, fmt("20 box pairs, max |<Qf,g> - <f,Qg>| / max(|<Qf,g>|,1) = %.2e (<= 1e-8)", worst)};
}

// 6. Schur parameters for random admissible configurations
Outcome schur_suite() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> up(1.05, 5.0), uq(0.0, 4.0), ua(-0.95, 3.0), ud(0.02, 2.5);
    int solved = 0, infeasible = 0, bad = 0;
    double chain = 0.0;
    std::string example;
    for (int i = 0; i < 200; ++i) {
        OffDiagonalConfig c;
        c.p = up(rng);
        c.q = c.p + uq(rng);
        c.alpha_src = ua(rng);
        c.beta_tgt = ua(rng);
        c.a = (c.alpha_src + 1.0) / c.p - 1.0 + ud(rng);
        try {
            const SchurParameters sp = solve_rst(c);
            bool ok = sp.t > 0.0 && sp.t < 1.0;
            for (const auto& k : schur_constraints(c, sp)) ok = ok && k.slack > 0.0;
            chain = std::max({chain, std::fabs(first_chain_defect(c, sp)), std::fabs(second_chain_defect(c, sp))});
            ok ? ++solved : ++bad;
        } catch (const InfeasibleError&) {
            if (example.empty()) {
                example = fmt(" (e.g. p=%.4g q=%.4g alpha=%.4g beta=%.4g a=%.4g)", c.p, c.q, c.alpha_src, c.beta_tgt,
                              c.a);
            }
            ++infeasible;
        }
    }
    const OffDiagonalConfig worked{2, 2, 0, 0, 0};
    const SchurParameters sp = solve_rst(worked);
    std::vector<HalfPlanePoint> zs;
    for (int i = 0; i < 10; ++i) zs.emplace_back(0.3 * i - 1.0, std::pow(16.0, i / 9.0) / 4.0);
    const SchurReport rep = verify_schur_conditions(worked, sp, zs);
    const double spread = std::max(rep.first_spread, rep.second_spread);
    const bool ok = solved == 200 && chain < 1e-12 && spread < 0.02;
    return {ok, fmt("solved %d/200 admissible configs, %d without power test functions%s, %d with a failed "
                    "inequality; chain defects max %.1e; worked p=q=2 spread %.2e (< 2%%)",
                    solved, infeasible, example.c_str(), bad, chain, spread)};
}

// 7. stable vs growing ratios under truncation
Outcome dichotomy() {
    const std::vector<OffDiagonalCase> cases{{OffDiagonalConfig::with_default_target(2, 2, 0, 0), std::nullopt},
                                             {OffDiagonalConfig::with_default_target(2, 4, 0, 0), std::nullopt},
                                             {OffDiagonalConfig::with_default_target(2, 2, 0.5, -0.6), std::nullopt}};
    QuadratureConfig qc;
    qc.tolerance = 1e-6;
    const auto rows = offdiag_sweep(cases, default_truncations(), qc);
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const bool right = r.error.empty() && (r.admissible ? r.stable : r.growing);
        ok = ok && right;
        detail += fmt("(p=%g q=%g alpha=%g a=%g) %s: ratios", r.cfg.p, r.cfg.q, r.cfg.alpha_src, r.cfg.a,
                      r.admissible ? "admissible" : "inadmissible");
        for (double v : r.ratios) detail += fmt(" %.4g", v);
        detail += r.admissible ? fmt(", spread %.3f (< 0.1); ", r.spread) : fmt(", growth x%.3g (>= 2); ", r.growth);
    }
    return {ok, detail};
}

// 8. exact identities
Outcome identities() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ul(-20, 20), uL(0.05, 20), ua(-0.9, 3);
    QuadratureConfig qc;
    double measure_err = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Interval I(ul(rng), uL(rng));
        const double a = ua(rng);
        const double box = alpha_measure_box(I, a), tent = alpha_measure_tent(I, a);
        measure_err = std::max({measure_err,
                                std::fabs(weighted_region_measure(CarlesonBox(I), {}, a, qc).value / box - 1.0),
                                std::fabs(weighted_region_measure(Tent(I), {}, a, qc).value / tent - 1.0),
                                std::fabs(box / tent * (1.0 - std::pow(2.0, -(1.0 + a))) - 1.0)});
    }
    SearchFamily fam;
    fam.depth = 3;
    fam.x_min = -8;
    fam.x_max = 8;
    double const_err = 0.0;
    for (double alpha : {0.0, -0.5, 1.0, 2.5}) {
        for (auto [p, q] : {std::pair{2.0, 2.0}, {1.5, 4.0}, {3.0, 3.0}}) {
            const ExponentConfig cfg{p, q, alpha, 0.0};
            const double v = bpq_constant(WeightPair({}, cfg), cfg, fam, qc).value;
            const double w = bp_constant({}, p, alpha, fam, qc).value;
            const_err = std::max({const_err, std::fabs(v / std::pow(1 + alpha, -(1 + q / cfg.p_conj())) - 1.0),
                                  std::fabs(w / std::pow(1 + alpha, -p) - 1.0)});
        }
    }
    const char* weights[] = {"modpow(0.5)", "modpow(-0.4)", "ypow(0.3)", "ypow(-0.2)*modpow(0.6)",
                             "kern(1,0.5)", "const(3)*modpow(0.6)", "kern(0.5,-0.7)*ypow(0.1)",
                             "modpow(-0.9)*kern(2,-1)", "ypow(0.2)", "modpow(0.25)*ypow(0.25)"};
    const ExponentConfig cfg{1.5, 2.5, 0.3, 0.0};
    const ExponentConfig dual{cfg.q_conj(), cfg.p_conj(), cfg.alpha, 0.0};
    QuadratureConfig fine;
    fine.tolerance = 1e-10;
    double dual_err = 0.0;
    for (const char* t : weights) {
        const auto omega = SymbolicFunction::parse(t);
        const double lhs = bpq_constant(WeightPair(omega.power(-1.0), dual), dual, fam, fine).value;
        const double rhs = bpq_constant(WeightPair(omega, cfg), cfg, fam, fine).value;
        dual_err = std::max(dual_err, std::fabs(lhs / std::pow(rhs, cfg.p_conj() / cfg.q) - 1.0));
    }
    std::size_t tiling = 0;
    for (double beta : {0.0, 1.0 / 3.0}) {
        TruncatedGrid g;
        g.beta = beta;
        tiling += tent_tiling_check(g, Rect{-4, 4, 1.0 / 64, 8}, 10000, 1).violations;
    }
    const bool ok = measure_err <= 1e-8 && const_err <= 1e-8 && dual_err <= 1e-8 && tiling == 0;
    return {ok, fmt("box/tent measures rel err %.1e, constant-weight [1] rel err %.1e, duality on 10 weights rel err "
                    "%.1e (tolerance 1e-8), tiling violations %zu in 2x10^4 samples",
                    measure_err, const_err, dual_err, tiling)};
}

// 9. M f <= S f and S f <= T f
Outcome pointwise() {
    const auto samples = log_uniform_samples(100, -2, 2, 1.0 / 256, 8, 9);
    const ExponentConfig cfg0{2, 2, 0, 0};
    const auto f = sharpness_function(cfg0, 0.2);
    const MinorizationReport m = maximal_minorization_check(f, cfg0, TruncatedGrid{}, samples, {}, 1e-6);
    const ExponentConfig cfg1{2, 4, 0, 0.5};
    const ComparisonReport st = s_below_t_check(SymbolicFunction::parse("trunc(-1.5,1)"), cfg1, samples, {}, 1e-6);
    return {m.violations == 0 && st.violations == 0,
            fmt("M <= S for f=%s: %zu/100 violations (max M/S %.4f); S <= T for a=0.5: %zu/100 violations (max S/T "
                "%.4f)",
                f.serialize().c_str(), m.violations, m.max_ratio, st.violations, st.max_ratio)};
}

// 10. geometric series over the boxes [0, 2^k) containing (1/2, 1/2)
Outcome dyadic_values() {
    const TruncatedGrid g{0.0, -14, 30};
    const HalfPlanePoint z(0.5, 0.5);
    double s0 = 0.0, s1 = 0.0;
    for (int k = 30; k >= 0; --k) {
        s0 += std::pow(4.0, -k);
        s1 += std::pow(2.0, -k);
    }
    const double v0 = dyadic_model_apply(box(0, 1), {2, 2, 0, 0}, g, z).value;
    const double v1 = dyadic_model_apply(box(0, 1), {2, 2, 0, 1}, g, z).value;
    const double e0 = std::fabs(v0 - s0), e1 = std::fabs(v1 - s1);
    return {e0 <= 1e-6 && e1 <= 1e-6 && std::fabs(v0 - 4.0 / 3.0) <= 1e-6 && std::fabs(v1 - 2.0) <= 1e-6,
            fmt("a=0: %.12f (4/3, direct sum err %.1e); a=1: %.12f (2, direct sum err %.1e)", v0, e0, v1, e1)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria 1-10"};
    std::vector<int> only;
    app.add_option("criteria", only, "criteria to run (default: all)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"lemma scaling slopes", lemma_scaling},
        {"sharpness p=q=2", [] { return sharpness({2, 2, 0, 0, true}, 0.05, 600); }},
        {"sharpness p<q", [] { return sharpness(ExponentConfig::make_balanced(4.0 / 3.0, 0, 0.5), 0.07, 600); }},
        {"domination constant", domination},
        {"dyadic self-adjointness", self_adjoint},
        {"Schur suite", schur_suite},
        {"admissibility dichotomy", dichotomy},
        {"exact identities", identities},
        {"pointwise inequalities", pointwise},
        {"dyadic oracle values", dyadic_values},
    };
    int failed = 0;
    for (int n : std::set<int>(only.begin(), only.end())) {
        const auto& [name, run] = criteria[n - 1];
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s: %s | %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
