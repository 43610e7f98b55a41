#include "bergman/schur.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "bergman/error.hpp"
#include "bergman/measure.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

namespace {

/// c0 + cr r + cs s > 0
struct Affine {
    double c0, cr, cs;
    double at(double r, double s) const noexcept { return c0 + cr * r + cs * s; }
};

std::array<Affine, 7> affine_constraints(const OffDiagonalConfig& cfg) {
    const double A = cfg.a - cfg.alpha_src;
    const double P = (cfg.alpha_src + 2.0) / cfg.p_conj();
    const double Qb = (cfg.beta_tgt + 2.0) / cfg.q;
    const double D = P + Qb;  // t = (P + r - s) / D
    return {{
        {0.0, 1.0, 0.0},
        {(cfg.beta_tgt + 1.0) / cfg.q, -1.0, 0.0},
        {0.0, 1.0, -1.0},
        {A * Qb / D, -A / D, 1.0 + A / D},
        {(cfg.alpha_src + 1.0) / cfg.p_conj() + A * P / D, A / D, -1.0 - A / D},
        {P / D, 1.0 / D, -1.0 / D},
        {Qb / D, -1.0 / D, 1.0 / D},
    }};
}

double min_slack(const std::array<Affine, 7>& cs, double r, double s) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : cs) m = std::min(m, c.at(r, s));
    return m;
}

}  // namespace

OffDiagonalConfig OffDiagonalConfig::with_default_target(double p, double q, double alpha, double a) {
    return {p, q, alpha, alpha + (2.0 + alpha) * (q / p - 1.0), a};
}

double OffDiagonalConfig::b() const noexcept {
    return a + 1.0 - (alpha_src + 2.0) / p + (beta_tgt + 2.0) / q;
}

double OffDiagonalConfig::omega_param() const noexcept {
    return -((alpha_src + 2.0) / p_conj() + (beta_tgt + 2.0) / q);
}

void OffDiagonalConfig::validate() const {
    if (!(p > 1.0) || !(q >= p) || !std::isfinite(q)) {
        throw InputError("exponents must satisfy 1 < p <= q < inf, got p=" + format_double(p) +
                         ", q=" + format_double(q));
    }
    if (!(alpha_src > -1.0)) throw InputError("source order alpha must exceed -1, got " + format_double(alpha_src));
    if (!(beta_tgt > -1.0)) throw InputError("target order beta must exceed -1, got " + format_double(beta_tgt));
    if (!std::isfinite(a) || !std::isfinite(alpha_src) || !std::isfinite(beta_tgt)) {
        throw InputError("non-finite exponent");
    }
}

bool admissibility(const OffDiagonalConfig& cfg) { return cfg.alpha_src + 1.0 < cfg.p * (cfg.a + 1.0); }

bool schur_construction_feasible(const OffDiagonalConfig& cfg) {
    if (!admissibility(cfg)) return false;
    const double A = cfg.a - cfg.alpha_src;
    if (A >= 0.0) return true;
    const double D = (cfg.alpha_src + 2.0) / cfg.p_conj() + (cfg.beta_tgt + 2.0) / cfg.q;
    return -A * (cfg.beta_tgt + 2.0) < (cfg.beta_tgt + 1.0) * D;
}

SchurParameters schur_parameters(const OffDiagonalConfig& cfg, double r, double s) {
    const double w = cfg.omega_param();
    SchurParameters sp;
    sp.r = r;
    sp.s = s;
    sp.t = (-(cfg.alpha_src + 2.0) / cfg.p_conj() + s - r) / w;
    sp.one_minus_t = (r - s - (cfg.beta_tgt + 2.0) / cfg.q) / w;
    return sp;
}

std::vector<Constraint> schur_constraints(const OffDiagonalConfig& cfg, const SchurParameters& sp) {
    const double A = cfg.a - cfg.alpha_src;
    return {
        {"r > 0", sp.r},
        {"r < (beta+1)/q", (cfg.beta_tgt + 1.0) / cfg.q - sp.r},
        {"s < r", sp.r - sp.s},
        {"s > -(a-alpha)(1-t)", sp.s + A * sp.one_minus_t},
        {"s < (alpha+1)/p' + (a-alpha)t", (cfg.alpha_src + 1.0) / cfg.p_conj() + A * sp.t - sp.s},
        {"t > 0", sp.t},
        {"t < 1", sp.one_minus_t},
    };
}

SchurParameters solve_rst(const OffDiagonalConfig& cfg) {
    cfg.validate();
    if (!admissibility(cfg)) {
        throw InfeasibleError("no Schur parameters: the condition alpha+1 < p(a+1) fails (" +
                              format_double(cfg.alpha_src + 1.0) + " >= " + format_double(cfg.p * (cfg.a + 1.0)) +
                              ")");
    }
    const auto cs = affine_constraints(cfg);

    // vertices of the closed feasible polygon
    std::vector<std::pair<double, double>> vertices;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            const double det = cs[i].cr * cs[j].cs - cs[i].cs * cs[j].cr;
            if (std::fabs(det) < 1e-14) continue;
            const double r = (-cs[i].c0 * cs[j].cs + cs[i].cs * cs[j].c0) / det;
            const double s = (-cs[i].cr * cs[j].c0 + cs[i].c0 * cs[j].cr) / det;
            if (min_slack(cs, r, s) >= -1e-12) vertices.emplace_back(r, s);
        }
    }
    const std::string empty =
        "no Schur parameters: with a < alpha the power test functions also need "
        "(alpha-a)(beta+2) < (beta+1)((alpha+2)/p' + (beta+2)/q), here " +
        format_double((cfg.alpha_src - cfg.a) * (cfg.beta_tgt + 2.0)) + " >= " +
        format_double((cfg.beta_tgt + 1.0) * -cfg.omega_param());
    if (vertices.empty()) throw InfeasibleError(empty);
    double s_lo = vertices.front().second, s_hi = s_lo;
    double rc = 0.0, sc = 0.0;
    for (const auto& [r, s] : vertices) {
        s_lo = std::min(s_lo, s);
        s_hi = std::max(s_hi, s);
        rc += r;
        sc += s;
    }

    constexpr int steps = 256;
    const double r_hi = (cfg.beta_tgt + 1.0) / cfg.q;
    double best = 0.0;
    std::optional<std::pair<double, double>> arg;
    for (int i = 1; i < steps; ++i) {
        const double r = r_hi * i / steps;
        for (int j = 1; j < steps; ++j) {
            const double s = s_lo + (s_hi - s_lo) * j / steps;
            const double m = min_slack(cs, r, s);
            if (m > best) {
                best = m;
                arg = {r, s};
            }
        }
    }
    if (!arg) {
        // thin polygon between grid lines: fall back to the vertex centroid
        const double n = static_cast<double>(vertices.size());
        arg = {rc / n, sc / n};
        if (!(min_slack(cs, arg->first, arg->second) > 0.0)) {
            throw InfeasibleError(empty);
        }
    }
    return schur_parameters(cfg, arg->first, arg->second);
}

double first_chain_defect(const OffDiagonalConfig& cfg, const SchurParameters& sp) {
    const double pc = cfg.p_conj();
    return sp.t * (1.0 + cfg.b()) * pc + sp.s * pc - (cfg.a - cfg.alpha_src) * sp.t * pc - cfg.alpha_src - 2.0 -
           sp.r * pc;
}

double second_chain_defect(const OffDiagonalConfig& cfg, const SchurParameters& sp) {
    const double q = cfg.q;
    return (1.0 + cfg.b()) * sp.one_minus_t * q + sp.r * q - cfg.beta_tgt - 2.0 -
           q * ((cfg.a - cfg.alpha_src) * sp.one_minus_t + sp.s);
}

OperatorValue height_kernel_integral(double e, double k, const HalfPlanePoint& z, const QuadratureConfig& qc) {
    return apply(OperatorSpec::general_t_plus(e, k - 1.0), NormalForm{}, z, qc);
}

SchurReport verify_schur_conditions(const OffDiagonalConfig& cfg, const SchurParameters& sp,
                                    const std::vector<HalfPlanePoint>& samples, const QuadratureConfig& qc) {
    cfg.validate();
    if (samples.empty()) throw InputError("Schur verification needs at least one sample point");
    const double pc = cfg.p_conj();
    const double q = cfg.q;
    const double A = cfg.a - cfg.alpha_src;
    const double kb = 1.0 + cfg.b();
    const double e1 = A * sp.t * pc - sp.s * pc + cfg.alpha_src;
    const double k1 = sp.t * kb * pc;
    const double e2 = cfg.beta_tgt - sp.r * q;
    const double k2 = sp.one_minus_t * kb * q;

    struct Row {
        double first, second;
        bool ok;
    };
    const auto rows = parallel_map(samples.size(), [&](std::size_t i) {
        const HalfPlanePoint& z = samples[i];
        const double ly = std::log(z.y());
        OperatorValue v1, v2;
        try {
            v1 = height_kernel_integral(e1, k1, z, qc);
            v2 = height_kernel_integral(e2, k2, z, qc);
        } catch (const DivergenceError& e) {
            throw DivergenceError(std::string("Schur integral diverges; the parameters violate their constraints: ") +
                                  e.what());
        }
        return Row{std::exp(v1.log_value() + sp.r * pc * ly),
                   std::exp(v2.log_value() + (A * sp.one_minus_t * q + sp.s * q) * ly), v1.converged && v2.converged};
    });

    SchurReport rep;
    rep.samples = samples;
    double max1 = 0.0, min1 = std::numeric_limits<double>::infinity();
    double max2 = 0.0, min2 = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        rep.first_ratio.push_back(row.first);
        rep.second_ratio.push_back(row.second);
        rep.converged = rep.converged && row.ok;
        max1 = std::max(max1, row.first);
        min1 = std::min(min1, row.first);
        max2 = std::max(max2, row.second);
        min2 = std::min(min2, row.second);
    }
    rep.first_spread = max1 / min1 - 1.0;
    rep.second_spread = max2 / min2 - 1.0;
    rep.m1 = std::pow(max1, 1.0 / pc);
    rep.m2 = std::pow(max2, 1.0 / q);
    return rep;
}

SchurBound schur_bound(const OffDiagonalConfig& cfg, const SchurReport& report, const SymbolicFunction& f,
                       const QuadratureConfig& qc) {
    const NormResult src = function_norm(f, cfg.p, {}, cfg.alpha_src, qc);
    const NormResult tgt = operator_norm(cfg.op(), f, cfg.q, {}, cfg.beta_tgt, qc);
    return {src.value, tgt.value, report.m1 * report.m2 * src.value, src.converged && tgt.converged};
}

LemmaScaling lemma_norm_scaling(double p, double nu, double gamma, const std::vector<double>& t_values,
                                const QuadratureConfig& qc) {
    if (!(p >= 1.0)) throw InputError("p must be at least 1, got " + format_double(p));
    if (!(nu > -1.0)) throw DivergenceError("measure order nu must exceed -1, got " + format_double(nu));
    if (!(gamma > (nu + 2.0) / p)) {
        throw DivergenceError("((z+it)/i)^-gamma is not in L^p: gamma=" + format_double(gamma) +
                              " must exceed (nu+2)/p=" + format_double((nu + 2.0) / p));
    }
    LemmaScaling out;
    out.t_values = t_values;
    out.expected_slope = -p * gamma + nu + 2.0;
    out.norms = parallel_map(t_values.size(), [&](std::size_t i) {
        const double t = t_values[i];
        if (!(t > 0.0)) throw InputError("shift t must be positive, got " + format_double(t));
        const NormalForm f = SymbolicFunction(ShiftedKernelPower{t, p * gamma}).normal_form();
        return integrate_function_checked(f, nu, qc);
    });
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < t_values.size(); ++i) pts.emplace_back(t_values[i], out.norms[i]);
    out.fit = fit_loglog(pts);
    return out;
}

}  // namespace bergman
