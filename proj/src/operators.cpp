#include "bergman/operators.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "bergman/error.hpp"
#include "bergman/measure.hpp"
#include "bergman/parallel.hpp"
#include "bergman/summation.hpp"

namespace bergman {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool touches_axis(const NormalForm& f) { return !f.support || f.support->y0 <= 0.0; }

/// f(-x, y) == f(x, y); radii and shifts are centred on the imaginary axis.
bool even_in_x(const NormalForm& f) { return !f.support || f.support->x0 == -f.support->x1; }

void add_positive(std::vector<double>& v, double x) {
    if (x > 0.0 && std::isfinite(x)) v.push_back(x);
}

/// int_0^pi |z - rho e^{-i theta}|^{-2} d theta = 2 atan2(S, 2 rho y) / S with S = ||z|^2 - rho^2|.
double half_circle_kernel(double r, double y, double rho) {
    const double S = std::fabs((r - rho) * (r + rho));
    const double d = 2.0 * rho * y;
    const double t = S / d;
    if (t < 1e-4) return (1.0 - t * t / 3.0) / (rho * y);
    return 2.0 * std::atan2(S, d) / S;
}

/// int |w|^s 1_{|w| <= R} |z - conj w|^{-2} dA(w) / exp(log_ref), one-dimensional in rho.
QuadResult radial_apply(double s, const std::optional<double>& radius, const HalfPlanePoint& z, double log_ref,
                        const QuadratureConfig& qc) {
    const double r = z.modulus();
    const double y = z.y();
    const double R = radius ? *radius : std::numeric_limits<double>::infinity();
    std::vector<double> br;
    for (double b : {r - y, r, r + y}) {
        if (b > 0.0 && b < R) br.push_back(b);
    }
    if (radius) br.push_back(R);
    if (br.empty()) br.push_back(1.0);

    CompensatedSum value, error;
    bool ok = true;
    auto add = [&](const QuadResult& q) {
        value.add(q.value);
        error.add(q.error);
        ok = ok && q.converged;
    };
    // [0, b]: rho^{s+1} d rho = d(rho^{s+2}) / (s+2)
    {
        const double b = br.front();
        const double e0 = s + 2.0;
        const double lc = e0 * std::log(b) - std::log(e0) - log_ref;
        auto g = [&](double u) {
            const double rho = b * std::pow(u, 1.0 / e0);
            if (!(rho > 0.0)) return std::exp(lc) * M_PI / (r * r);
            return std::exp(lc) * half_circle_kernel(r, y, rho);
        };
        add(integrate_adaptive(g, 0.0, 1.0, qc.tolerance, 0.0, qc.max_intervals));
    }
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        auto g = [&](double rho) { return std::exp((s + 1.0) * std::log(rho) - log_ref) * half_circle_kernel(r, y, rho); };
        add(integrate_adaptive(g, br[i], br[i + 1], qc.tolerance, 0.0, qc.max_intervals));
    }
    if (!radius) {
        // [c, inf): rho^{s-1} d rho = d(rho^s) / s, rho = c u^{1/s}
        const double c = br.back();
        const double lc = s * std::log(c) - std::log(-s) - log_ref;
        auto g = [&](double u) {
            if (!(u > 0.0)) return std::exp(lc) * M_PI;
            const double rho = c * std::pow(u, 1.0 / s);
            if (!std::isfinite(rho)) return std::exp(lc) * M_PI;
            return std::exp(lc) * rho * rho * half_circle_kernel(r, y, rho);
        };
        add(integrate_adaptive(g, 0.0, 1.0, qc.tolerance, 0.0, qc.max_intervals));
    }
    return {value.value(), error.value(), ok};
}

/// int_{|T|}^inf (1 + t^2)^{-m/2} dt for m > 1.
double kernel_tail(double T, double m) {
    T = std::fabs(T);
    if (m == 2.0) return std::atan2(1.0, T);
    return 0.5 * boost::math::beta(0.5 * (m - 1.0), 0.5, 1.0 / (1.0 + T * T));
}

/// int_{T1}^{T0} (1 + t^2)^{-m/2} dt for T1 <= T0.
double kernel_segment(double T1, double T0, double m) {
    // short segments: direct quadrature, since the tail difference cancels
    const double mid = 0.5 * (T0 + T1);
    if (T0 - T1 <= 0.25 * std::hypot(1.0, mid)) {
        return boost::math::quadrature::gauss<double, 10>::integrate(
            [m](double t) { return std::pow(1.0 + t * t, -0.5 * m); }, T1, T0);
    }
    if (T1 >= 0.0) return kernel_tail(T1, m) - kernel_tail(T0, m);
    if (T0 <= 0.0) return kernel_tail(T0, m) - kernel_tail(T1, m);
    const double full = m == 2.0 ? M_PI : boost::math::beta(0.5, 0.5 * (m - 1.0));
    return full - kernel_tail(T0, m) - kernel_tail(T1, m);
}

/// int_rect v^t |z - conj w|^{-m} dA(w) / exp(log_ref), with the x-integral in closed form.
QuadResult box_apply(const Rect& r, double t, double m, const HalfPlanePoint& z, double log_ref,
                     const QuadratureConfig& qc) {
    const double x = z.x();
    const double y = z.y();
    auto X = [&](double v) {
        const double h = y + v;
        const double seg = kernel_segment((x - r.x1) / h, (x - r.x0) / h, m);
        return seg * std::exp((1.0 - m) * std::log(h) - log_ref);
    };
    std::vector<double> br{r.y0};
    if (y > r.y0 && y < r.y1) br.push_back(y);
    br.push_back(r.y1);

    CompensatedSum value, error;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i];
        const double b = br[i + 1];
        QuadResult q;
        if (a <= 0.0) {
            // v = b u^{1/(t+1)}: v^t dv = b^{t+1} / (t+1) du
            const double e = t + 1.0;
            const double lc = e * std::log(b) - std::log(e);
            auto g = [&](double u) { return std::exp(lc) * X(b * std::pow(u, 1.0 / e)); };
            q = integrate_adaptive(g, 0.0, 1.0, qc.tolerance, 0.0, qc.max_intervals);
        } else {
            // v = e^s
            auto g = [&](double s) {
                const double v = std::exp(s);
                return std::exp((t + 1.0) * s) * X(v);
            };
            q = integrate_adaptive(g, std::log(a), std::log(b), qc.tolerance, 0.0, qc.max_intervals);
        }
        value.add(q.value);
        error.add(q.error);
        ok = ok && q.converged;
    }
    return {value.value(), error.value(), ok};
}

}  // namespace

double OperatorSpec::output_height_exponent() const noexcept {
    return kind == OperatorKind::FractionalS ? a : 0.0;
}

double OperatorSpec::kernel_exponent() const noexcept {
    switch (kind) {
        case OperatorKind::PositiveBergman:
        case OperatorKind::FractionalS:
            return 2.0 + alpha;
        case OperatorKind::FractionalT:
            return 2.0 + alpha - a;
        case OperatorKind::GeneralTPlus:
            return 1.0 + b;
    }
    return 0.0;
}

double OperatorSpec::source_height_exponent() const noexcept {
    return kind == OperatorKind::GeneralTPlus ? a : alpha;
}

void OperatorSpec::validate() const {
    if (kind != OperatorKind::GeneralTPlus && !(alpha > -1.0)) {
        throw InputError(name() + ": alpha must exceed -1");
    }
    if (!std::isfinite(alpha) || !std::isfinite(a) || !std::isfinite(b)) throw InputError(name() + ": non-finite exponent");
    if (!(kernel_exponent() > 0.0)) throw InputError(name() + ": kernel exponent must be positive");
}

std::string OperatorSpec::name() const {
    switch (kind) {
        case OperatorKind::PositiveBergman:
            return "P+(alpha=" + format_double(alpha) + ")";
        case OperatorKind::FractionalS:
            return "S(alpha=" + format_double(alpha) + ", a=" + format_double(a) + ")";
        case OperatorKind::FractionalT:
            return "T(alpha=" + format_double(alpha) + ", a=" + format_double(a) + ")";
        case OperatorKind::GeneralTPlus:
            return "T+(a=" + format_double(a) + ", b=" + format_double(b) + ")";
    }
    return "";
}

OperatorValue apply(const OperatorSpec& op, const NormalForm& f_in, const HalfPlanePoint& z,
                    const QuadratureConfig& qc) {
    op.validate();
    if (f_in.is_zero()) return {};
    // the coefficient is applied once at the end, so scalar multiples scale exactly
    NormalForm f = f_in;
    const double c = std::fabs(f.coefficient);
    f.coefficient = 1.0;
    const double aout = op.output_height_exponent();
    const double m = op.kernel_exponent();
    const double aw = op.source_height_exponent();
    const double s = f.modulus_exponent;
    const double t = f.height_exponent + aw;
    const bool origin = f.support_touches_origin();

    if (touches_axis(f) && !(t > -1.0)) {
        throw DivergenceError(op.name() + ": f y^" + format_double(aw) + " ~ y^" + format_double(t) +
                              " is not integrable at the real axis");
    }
    if (origin && !(s + t + 2.0 > 0.0)) {
        throw DivergenceError(op.name() + ": f is not integrable at the origin (degree " +
                              format_double(s + t) + ")");
    }
    const double decay = f.degree_at_infinity() + aw + 2.0 - m;
    if (!f.bounded_support() && !(decay < 0.0)) {
        throw DivergenceError(op.name() + ": f decays like |w|^" + format_double(f.degree_at_infinity()) +
                              ", too slowly for the kernel |z - conj w|^-" + format_double(m));
    }

    const double x = z.x();
    const double y = z.y();
    const double rz = z.modulus();
    const double log_ref = -m * std::log(std::max(1.0, rz + y));
    auto integrand = [&](double u, double v, double log_w) {
        const double l = f.log_abs(u, v);
        if (l == kNegInf) return 0.0;
        const double dx = x - u;
        const double dy = y + v;
        return std::exp(l + aw * std::log(v) - 0.5 * m * std::log(dx * dx + dy * dy) - log_ref + log_w);
    };

    QuadResult q;
    if (!f.support && f.shifts.empty() && t == 0.0 && m == 2.0) {
        q = radial_apply(s, f.radius, z, log_ref, qc);
    } else if (f.support && f.shifts.empty() && !f.radius && s == 0.0 && m > 1.0) {
        q = box_apply(*f.support, t, m, z, log_ref, qc);
    } else if (f.support) {
        const Rect& r = *f.support;
        RectPlan plan;
        plan.rect = r;
        plan.radius = f.radius;
        plan.axis_exponent = t + ((origin && s < -1.0) ? s + 1.0 : 0.0);
        if (x >= r.x0 && x <= r.x1) plan.x_peaks.push_back(x);
        if (s != 0.0 && r.x0 <= 0.0 && 0.0 <= r.x1) plan.x_peaks.push_back(0.0);
        plan.y_breaks.push_back(y);
        for (const auto& k : f.shifts) plan.y_breaks.push_back(k.shift);
        plan.tolerance = qc.tolerance;
        plan.max_intervals = qc.max_intervals;
        q = integrate_rect(integrand, plan);
    } else {
        PolarPlan plan;
        plan.origin_exponent = s + t + 2.0;
        if (f.radius) {
            plan.outer_radius = *f.radius;
        } else {
            plan.infinity_exponent = -decay;
        }
        plan.axis_exponent = t;
        for (double b : {std::fabs(x) - y, std::fabs(x) + y}) {
            add_positive(plan.radial_breaks, b);
        }
        for (const auto& k : f.shifts) add_positive(plan.radial_breaks, k.shift);
        plan.symmetric = x == 0.0;
        plan.tolerance = qc.tolerance;
        plan.max_intervals = qc.max_intervals;
        q = integrate_polar(integrand, plan);
    }
    return {c * q.value, log_ref + aout * std::log(y), c * q.error, q.converged};
}

OperatorValue apply(const OperatorSpec& op, const SymbolicFunction& f, const HalfPlanePoint& z,
                    const QuadratureConfig& qc) {
    return apply(op, f.normal_form(), z, qc);
}

NormResult operator_norm(const OperatorSpec& op, const SymbolicFunction& f, double q, const SymbolicFunction& W,
                         double nu, const QuadratureConfig& qc, const std::optional<Rect>& region) {
    return operator_norm(op, f.normal_form(), q, W, nu, qc, region);
}

NormResult operator_norm(const OperatorSpec& op, const NormalForm& fn, double q, const SymbolicFunction& W, double nu,
                         const QuadratureConfig& qc, const std::optional<Rect>& region) {
    op.validate();
    if (!(q >= 1.0)) throw InputError("norm exponent must be at least 1, got " + format_double(q));
    if (!(nu > -1.0)) throw DomainError("measure y^" + format_double(nu) + " dxdy is not locally finite");
    if (fn.is_zero()) return {};
    const NormalForm wq = W.normal_form().abs_pow(q);
    const double aout = op.output_height_exponent();
    const double m = op.kernel_exponent();
    const double aw = op.source_height_exponent();

    // Growth exponents of op f: near the origin, at infinity and at the real axis.
    const double d0 = fn.support_touches_origin() ? std::min(0.0, fn.degree_at_origin() + aw + 2.0 - m) : 0.0;
    const double dinf = fn.bounded_support() ? -m : std::max(-m, fn.degree_at_infinity() + aw + 2.0 - m);
    const double daxis = touches_axis(fn) ? std::min(0.0, fn.height_exponent + aw + 2.0 - m) : 0.0;
    const double e0 = q * (aout + d0) + wq.degree_at_origin() + nu + 2.0;
    const double einf = -(q * (aout + dinf) + wq.degree_at_infinity() + nu + 2.0);
    const double tau = q * (aout + daxis) + wq.height_exponent + nu;

    const bool at_axis = !region || region->y0 <= 0.0;
    const bool at_origin = !region || region->touches_origin();
    if (at_axis && !(tau > -1.0)) {
        throw DivergenceError("|" + op.name() + " f|^q is not integrable at the real axis (exponent " +
                              format_double(tau) + ")");
    }
    if (at_origin && !(e0 > 0.0)) {
        throw DivergenceError("|" + op.name() + " f|^q is not integrable at the origin (exponent " +
                              format_double(e0) + ")");
    }
    if (!region && !(einf > 0.0)) {
        throw DivergenceError("|" + op.name() + " f|^q is not integrable at infinity (decay exponent " +
                              format_double(einf) + ")");
    }

    QuadratureConfig inner = qc;
    inner.tolerance = qc.tolerance * 1e-2;
    bool inner_ok = true;
    auto integrand = [&](double x, double y, double log_w) {
        const double lw = wq.log_abs(x, y);
        if (lw == kNegInf) return 0.0;
        const OperatorValue v = apply(op, fn, HalfPlanePoint(x, y), inner);
        // the inner target is tighter than needed; only errors above the outer tolerance count
        if (!v.converged && v.error > qc.tolerance * v.mantissa) inner_ok = false;
        if (!(v.mantissa > 0.0)) return 0.0;
        return std::exp(q * v.log_value() + lw + nu * std::log(y) + log_w);
    };

    std::vector<double> scales{1.0};
    if (fn.radius) scales.push_back(*fn.radius);
    if (fn.support) {
        for (double c : {fn.support->x0, fn.support->x1, fn.support->y0, fn.support->y1}) {
            add_positive(scales, std::fabs(c));
        }
    }
    for (const auto& k : fn.shifts) add_positive(scales, k.shift);

    QuadResult r;
    if (!region) {
        PolarPlan plan;
        plan.origin_exponent = e0;
        plan.infinity_exponent = einf;
        plan.axis_exponent = tau;
        plan.radial_breaks = scales;
        plan.symmetric = even_in_x(fn) && even_in_x(wq);
        plan.tolerance = qc.tolerance;
        plan.max_intervals = qc.max_intervals;
        r = integrate_polar(integrand, plan);
    } else {
        RectPlan plan;
        plan.rect = *region;
        plan.axis_exponent = tau;
        plan.x_peaks.push_back(0.0);
        if (fn.support) {
            plan.x_peaks.push_back(fn.support->x0);
            plan.x_peaks.push_back(fn.support->x1);
        }
        plan.y_breaks = scales;
        plan.tolerance = qc.tolerance;
        plan.max_intervals = qc.max_intervals;
        r = integrate_rect(integrand, plan);
    }
    NormResult out;
    out.value = std::pow(r.value, 1.0 / q);
    out.error = r.value > 0.0 ? out.value * r.error / (q * r.value) : 0.0;
    out.converged = r.converged && inner_ok;
    return out;
}

NormResult function_norm(const SymbolicFunction& f, double p, const SymbolicFunction& W, double nu,
                         const QuadratureConfig& qc, const std::optional<Rect>& region) {
    return function_norm(f.normal_form(), p, W, nu, qc, region);
}

NormResult function_norm(const NormalForm& f, double p, const SymbolicFunction& W, double nu,
                         const QuadratureConfig& qc, const std::optional<Rect>& region) {
    if (!(p >= 1.0)) throw InputError("norm exponent must be at least 1, got " + format_double(p));
    const NormalForm h = (W.normal_form() * f).abs_pow(p);
    const IntegralResult r = integrate_function(h, nu, qc, region);
    NormResult out;
    out.value = std::pow(r.value, 1.0 / p);
    out.error = r.value > 0.0 ? out.value * r.error_estimate / (p * r.value) : 0.0;
    out.converged = r.converged;
    return out;
}

NormRatio norm_ratio(const OperatorSpec& op, const SymbolicFunction& f, const ExponentConfig& cfg,
                     const NormSpaces& spaces, const QuadratureConfig& qc, const std::optional<Rect>& region) {
    const NormResult src = function_norm(f, cfg.p, spaces.source_weight, spaces.source_order, qc, region);
    if (!(src.value > 0.0)) throw DomainError("source norm is zero");
    const NormResult tgt = operator_norm(op, f, cfg.q, spaces.target_weight, spaces.target_order, qc, region);
    return {src.value, tgt.value, tgt.value / src.value, src.converged && tgt.converged};
}

MinorizationReport maximal_minorization_check(const SymbolicFunction& f, const ExponentConfig& cfg,
                                              const TruncatedGrid& g, const std::vector<HalfPlanePoint>& samples,
                                              const QuadratureConfig& qc, double slack) {
    const OperatorSpec S = OperatorSpec::fractional_s(cfg.alpha, cfg.a);
    const auto pairs = parallel_map(samples.size(), [&](std::size_t i) {
        const double M = fractional_maximal(f, SymbolicFunction(), cfg, g, samples[i], qc);
        const double Sv = apply(S, f, samples[i], qc).value();
        return std::pair{M, Sv};
    });
    MinorizationReport rep;
    rep.samples = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [M, Sv] = pairs[i];
        if (M > Sv * (1.0 + slack)) ++rep.violations;
        if (Sv > 0.0 && M / Sv > rep.max_ratio) {
            rep.max_ratio = M / Sv;
            rep.worst = samples[i];
        }
    }
    return rep;
}

}  // namespace bergman
