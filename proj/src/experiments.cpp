#include "bergman/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bergman/error.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

std::vector<HalfPlanePoint> log_uniform_samples(std::size_t n, double x0, double x1, double y0, double y1,
                                                std::uint64_t seed) {
    if (!(x0 <= x1) || !(y0 > 0.0) || !(y0 <= y1)) throw InputError("sample ranges are empty or not in H");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(x0, x1), ly(std::log(y0), std::log(y1));
    std::vector<HalfPlanePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = ux(rng);
        out.emplace_back(x, std::exp(ly(rng)));
    }
    return out;
}

// ------------------------------------------------------------------ sharpness

void SharpnessConfig::validate() const {
    cfg.validate();
    if (!cfg.balanced) throw InputError("sharpness needs balanced exponents (1/p - 1/q = a/(2+alpha))");
    if (!(cfg.p_conj() / cfg.q >= 1.0)) {
        throw InputError("sharpness needs p'/q >= 1, got " + format_double(cfg.p_conj() / cfg.q));
    }
    if (deltas.empty()) throw InputError("delta list is empty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) throw InputError("delta must lie in (0,1), got " + format_double(deltas[i]));
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw InputError("delta list must be decreasing");
    }
    qc.validate();
    search.validate();
}

SymbolicFunction sharpness_weight(const ExponentConfig& cfg, double delta) {
    return SymbolicFunction(PowerOfModulus{(2.0 + cfg.alpha - delta) / cfg.p_conj()});
}

SymbolicFunction sharpness_function(const ExponentConfig& cfg, double delta) {
    return SymbolicFunction(TruncatedPower{delta - 2.0 - cfg.alpha, 1.0});
}

SharpnessResult sharpness_run(const SharpnessConfig& sc) {
    sc.validate();
    const ExponentConfig& cfg = sc.cfg;
    const OperatorSpec op = OperatorSpec::fractional_s(cfg.alpha, cfg.a);
    SharpnessResult out;
    out.cfg = cfg;
    out.expected_weight_slope = cfg.q / cfg.p_conj();
    out.expected_source_slope = 1.0 / cfg.p;
    out.expected_ratio_slope = 1.0 / cfg.p_conj() + 1.0 / cfg.q;

    for (double d : sc.deltas) {
        SharpnessRow row;
        row.delta = d;
        try {
            const SymbolicFunction w = sharpness_weight(cfg, d);
            const SymbolicFunction f = sharpness_function(cfg, d);
            row.weight_constant = bpq_constant(WeightPair(w, cfg), cfg, sc.search, sc.qc).value;
            const NormRatio r = norm_ratio(op, f, cfg, NormSpaces{w, w, cfg.alpha, cfg.alpha}, sc.qc);
            row.source_norm = r.source;
            row.target_norm = r.target;
            row.ratio = r.ratio;
            row.converged = r.converged;
        } catch (const Error& e) {
            row.error = e.what();
            row.converged = false;
        }
        out.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> wpts, spts, rpts;
    for (const auto& row : out.rows) {
        if (!row.error.empty()) continue;
        wpts.emplace_back(1.0 / row.delta, row.weight_constant);
        spts.emplace_back(1.0 / row.delta, row.source_norm);
        rpts.emplace_back(1.0 / row.delta, row.ratio);
    }
    if (wpts.size() >= 3) {
        out.weight_fit = fit_loglog(wpts);
        out.source_fit = fit_loglog(spts);
        out.ratio_fit = fit_loglog(rpts);
    }
    return out;
}

// ------------------------------------------------------ off-diagonal sweep

std::vector<double> default_truncations() { return {0x1p8, 0x1p16, 0x1p32}; }

std::vector<OffDiagonalRow> offdiag_sweep(const std::vector<OffDiagonalCase>& cases,
                                          const std::vector<double>& truncations, const QuadratureConfig& qc) {
    if (truncations.size() < 2) throw InputError("the sweep needs at least two truncations");
    for (double L : truncations) {
        if (!(L > 1.0) || !std::isfinite(L)) throw InputError("truncation must exceed 1, got " + format_double(L));
    }
    std::vector<OffDiagonalRow> rows;
    for (const auto& c : cases) {
        OffDiagonalRow row;
        row.cfg = c.cfg;
        row.truncations = truncations;
        try {
            c.cfg.validate();
            row.admissible = admissibility(c.cfg);
            row.source_power = c.source_power.value_or(
                row.admissible ? 0.0 : (c.cfg.alpha_src - c.cfg.a) * (c.cfg.p_conj() - 1.0));
            for (double L : truncations) {
                NormalForm f;
                f.height_exponent = -row.source_power;
                f.support = Rect{0.0, 1.0, 1.0 / L, 1.0};
                const NormResult src = function_norm(f, c.cfg.p, {}, c.cfg.alpha_src, qc);
                const NormResult tgt = operator_norm(c.cfg.op(), f, c.cfg.q, {}, c.cfg.beta_tgt, qc);
                row.ratios.push_back(tgt.value / src.value);
                row.converged = row.converged && src.converged && tgt.converged;
            }
            const auto [lo, hi] = std::minmax_element(row.ratios.begin(), row.ratios.end());
            row.spread = *hi / *lo - 1.0;
            row.growth = row.ratios.back() / row.ratios.front();
            row.stable = row.spread < 0.1;
            row.growing = row.growth >= 2.0;
        } catch (const Error& e) {
            row.error = e.what();
            row.converged = false;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------- domination

DominationResult domination_run(const SymbolicFunction& f, const DominationConfig& dc) {
    dc.cfg.validate();
    TruncatedGrid g0 = dc.grid, g1 = dc.grid;
    g0.beta = 0.0;
    g1.beta = 1.0 / 3.0;
    const DyadicModel q0(f, dc.cfg, g0, dc.qc);
    const DyadicModel q1(f, dc.cfg, g1, dc.qc);
    const OperatorSpec S = OperatorSpec::fractional_s(dc.cfg.alpha, dc.cfg.a);

    DominationResult out;
    out.samples = log_uniform_samples(dc.samples, dc.x_min, dc.x_max, dc.y_min, dc.y_max, dc.seed);
    out.ratios.resize(out.samples.size());
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const HalfPlanePoint& z = out.samples[i];
        const DyadicSum a = q0.apply(z);
        const DyadicSum b = q1.apply(z);
        if (a.boxes == 0 && b.boxes == 0) {
            throw DomainError("sample (" + format_double(z.x()) + ", " + format_double(z.y()) +
                              ") lies in no grid box");
        }
        const double s = apply(S, f, z, dc.qc).value();
        out.ratios[i] = s / (a.value + b.value);
    }
    const auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    out.min_ratio = *lo;
    out.max_ratio = *hi;
    out.spread = *hi / *lo;
    return out;
}

// ---------------------------------------------------------- S <= T

ComparisonReport s_below_t_check(const SymbolicFunction& f, const ExponentConfig& cfg,
                                 const std::vector<HalfPlanePoint>& samples, const QuadratureConfig& qc,
                                 double slack) {
    cfg.validate();
    const OperatorSpec S = OperatorSpec::fractional_s(cfg.alpha, cfg.a);
    const OperatorSpec T = OperatorSpec::fractional_t(cfg.alpha, cfg.a);
    const auto pairs = parallel_map(samples.size(), [&](std::size_t i) {
        return std::pair{apply(S, f, samples[i], qc).value(), apply(T, f, samples[i], qc).value()};
    });
    ComparisonReport rep;
    rep.samples = samples.size();
    for (const auto& [s, t] : pairs) {
        if (s > t * (1.0 + slack)) ++rep.violations;
        if (t > 0.0) rep.max_ratio = std::max(rep.max_ratio, s / t);
    }
    return rep;
}

}  // namespace bergman
