#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/summation.hpp"

namespace bergman {

/// Truncation rectangle, base mesh and refinement budget for the cell engine,
/// plus the relative tolerance shared by every integration routine.
struct QuadratureConfig {
    double x_min = -64.0;
    double x_max = 64.0;
    double y_max = 64.0;
    int x_cells = 16;
    int y_layers = 24;  // geometric layers y_max/2^k; the last cell reaches the axis
    bool geometric_layers = true;  // false: y_layers uniform rows
    double tolerance = 1e-8;
    int max_depth = 14;
    std::size_t max_cells = 200000;
    int max_intervals = 2000;  // per 1-D adaptive integral

    void validate() const;
    Rect truncation() const noexcept { return {x_min, x_max, 0.0, y_max}; }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double tail_bound = 0.0;
    bool converged = true;
};

// ------------------------------------------------------------ 1-D adaptive

namespace gk {

inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    std::size_t id;
};

/// One G7-K15 panel with the QUADPACK error heuristic.
template <class F>
Segment panel(F& f, double a, double b, std::size_t id) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[7];
    double resg = fc * wg[3];
    double resabs = std::fabs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += wgk[j] * (f1[j] + f2[j]);
        resabs += wgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
    resk *= h;
    resg *= h;
    resabs *= std::fabs(h);
    resasc *= std::fabs(h);
    double err = std::fabs(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk, err, id};
}

}  // namespace gk

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// Globally adaptive G7-K15 on [a, b], split first at the given breakpoints.
/// The integrand must be finite at interior points; endpoints are never sampled.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                              int max_intervals = 2000, const std::vector<double>& breaks = {}) {
    if (!(b > a)) return {};
    std::vector<double> pts{a};
    for (double p : breaks) {
        if (p > a && p < b) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(b);

    auto worse = [](const gk::Segment& x, const gk::Segment& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.id > y.id;
    };
    std::priority_queue<gk::Segment, std::vector<gk::Segment>, decltype(worse)> heap(worse);
    std::vector<gk::Segment> frozen;
    std::size_t next_id = 0;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto s = gk::panel(f, pts[i], pts[i + 1], next_id++);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    int count = static_cast<int>(heap.size());
    bool converged = true;
    while (!heap.empty()) {
        if (total_err <= std::max(abs_tol, rel_tol * std::fabs(total))) break;
        if (count >= max_intervals) {
            converged = false;
            break;
        }
        gk::Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b) || (s.b - s.a) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                                             std::max(std::fabs(s.a), std::fabs(s.b))) {
            frozen.push_back(s);
            continue;
        }
        auto l = gk::panel(f, s.a, mid, next_id++);
        auto r = gk::panel(f, mid, s.b, next_id++);
        total += l.value + r.value - s.value;
        total_err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Final sum in creation order so the value does not depend on heap layout.
    std::vector<gk::Segment> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    CompensatedSum v, e;
    for (const auto& s : all) {
        v.add(s.value);
        e.add(s.error);
    }
    QuadResult r{v.value(), e.value(), converged};
    if (r.error > std::max(abs_tol, rel_tol * std::fabs(r.value))) r.converged = false;
    return r;
}

// ------------------------------------------------- two-dimensional drivers
//
// Integrands take (x, y, log_w) and return F(x, y) * exp(log_w). Passing the
// Jacobian as a logarithm lets the integrand combine it with its own log before
// exponentiating, which keeps power singularities of high order representable.

struct PolarPlan {
    double origin_exponent = 1.0;    // rho^2 * angular integral ~ rho^{e0} as rho -> 0
    double infinity_exponent = 1.0;  // ... ~ rho^{-einf} as rho -> inf
    double outer_radius = std::numeric_limits<double>::infinity();
    double axis_exponent = 0.0;      // F ~ y^tau near the real axis
    std::vector<double> radial_breaks;
    bool symmetric = false;          // F(-x, y) == F(x, y)
    double tolerance = 1e-8;
    int max_intervals = 2000;
};

/// Integral of F over the upper half-plane (or the half-disk of radius outer_radius)
/// in polar coordinates. The angular variable is folded onto (0, pi/2) and the
/// radius is compactified at both ends with power substitutions.
template <class F>
QuadResult integrate_polar(F&& f, const PolarPlan& plan) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    const double tau = plan.axis_exponent;
    // phi ~ v^{2/(tau+1)}: removes y^tau and smooths logarithmic factors at the axis
    const bool substitute = true;
    const double inv = 2.0 / (std::min(tau, 0.0) + 1.0);
    const double log_theta_scale = std::log(half_pi * inv);
    const double inner_tol = plan.tolerance * 0.05;
    bool inner_ok = true;

    // Angular integral times rho^2 (one rho from the area element, one from d(log rho)).
    auto angular = [&](double rho, double log_w) {
        const double log_rw = log_w + 2.0 * std::log(rho);
        auto g = [&](double v) {
            double phi, lw;
            if (substitute) {
                const double lv = std::log(v);
                phi = half_pi * std::exp(inv * lv);
                lw = log_rw + log_theta_scale + (inv - 1.0) * lv;
            } else {
                phi = half_pi * v;
                lw = log_rw + log_theta_scale;
            }
            const double x = rho * std::cos(phi);
            const double y = rho * std::sin(phi);
            if (!(y > 0.0)) return 0.0;
            if (plan.symmetric) return 2.0 * f(x, y, lw);
            return f(x, y, lw) + f(-x, y, lw);
        };
        auto r = integrate_adaptive(g, 0.0, 1.0, inner_tol, 0.0, plan.max_intervals);
        if (!r.converged) inner_ok = false;
        return r.value;
    };

    std::vector<double> br;
    for (double b : plan.radial_breaks) {
        if (b > 0.0 && std::isfinite(b) && b < plan.outer_radius) br.push_back(b);
    }
    const bool capped = std::isfinite(plan.outer_radius);
    if (capped) br.push_back(plan.outer_radius);
    if (br.empty()) br.push_back(1.0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());

    CompensatedSum value, error;
    bool ok = true;
    auto accumulate = [&](const QuadResult& r) {
        value.add(r.value);
        error.add(r.error);
        ok = ok && r.converged;
    };

    // Origin piece: rho = b u^{1/e0}, d(log rho) = du / (e0 u).
    {
        const double b = br.front();
        const double e0 = plan.origin_exponent;
        auto g = [&](double u) {
            const double lu = std::log(u);
            const double rho = b * std::exp(lu / e0);
            if (!(rho > 1e-290)) return 0.0;
            return angular(rho, -std::log(e0) - lu);
        };
        accumulate(integrate_adaptive(g, 0.0, 1.0, plan.tolerance, 0.0, plan.max_intervals));
    }
    // Middle pieces in log rho.
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        auto g = [&](double s) { return angular(std::exp(s), 0.0); };
        const double s0 = std::log(br[i]);
        const double s1 = std::log(br[i + 1]);
        accumulate(integrate_adaptive(g, s0, s1, plan.tolerance, 0.0, plan.max_intervals));
    }
    // Tail piece: rho = c u^{-1/einf}.
    if (!capped) {
        const double c = br.back();
        const double ei = plan.infinity_exponent;
        auto g = [&](double u) {
            const double lu = std::log(u);
            const double rho = c * std::exp(-lu / ei);
            if (!(rho < 1e290)) return 0.0;
            return angular(rho, -std::log(ei) - lu);
        };
        accumulate(integrate_adaptive(g, 0.0, 1.0, plan.tolerance, 0.0, plan.max_intervals));
    }
    QuadResult r{value.value(), error.value(), ok && inner_ok};
    return r;
}

struct RectPlan {
    Rect rect;                       // bounded region of integration
    std::optional<double> radius;    // intersect with the disk |z| <= radius
    double axis_exponent = 0.0;      // x-integral ~ y^tau near y = 0 when rect touches the axis
    std::vector<double> x_peaks;     // inner peaks; the mapping resolves width ~ y around each
    std::vector<double> y_breaks;
    double tolerance = 1e-8;
    int max_intervals = 2000;
};

namespace detail {

/// Integral over [lo, hi] of g(x) dx with asinh clustering of width `scale` at the
/// listed peaks. g takes (x, log_w).
template <class G>
QuadResult integrate_peaked(G& g, double lo, double hi, const std::vector<double>& peaks, double scale,
                            double tol, int max_intervals) {
    std::vector<double> pts{lo, hi};
    std::vector<double> anchors;
    for (double p : peaks) {
        if (p > lo && p < hi) pts.push_back(p);
        if (p >= lo && p <= hi) anchors.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto is_anchor = [&](double p) { return std::find(anchors.begin(), anchors.end(), p) != anchors.end(); };

    CompensatedSum value, error;
    bool ok = true;
    auto mapped = [&](double anchor, double end) {
        // x = anchor + sign * scale * sinh(s), s in [0, asinh(|end - anchor| / scale)]
        const double sign = end > anchor ? 1.0 : -1.0;
        const double smax = std::asinh(std::fabs(end - anchor) / scale);
        auto h = [&](double s) {
            const double x = anchor + sign * scale * std::sinh(s);
            return g(x, std::log(scale * std::cosh(s)));
        };
        auto r = integrate_adaptive(h, 0.0, smax, tol, 0.0, max_intervals);
        value.add(r.value);
        error.add(r.error);
        ok = ok && r.converged;
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        const bool la = is_anchor(a);
        const bool lb = is_anchor(b);
        if (la && lb) {
            const double m = 0.5 * (a + b);
            mapped(a, m);
            mapped(b, m);
        } else if (la) {
            mapped(a, b);
        } else if (lb) {
            mapped(b, a);
        } else {
            auto h = [&](double x) { return g(x, 0.0); };
            auto r = integrate_adaptive(h, a, b, tol, 0.0, max_intervals);
            value.add(r.value);
            error.add(r.error);
            ok = ok && r.converged;
        }
    }
    return {value.value(), error.value(), ok};
}

}  // namespace detail

/// Iterated integral over a bounded rectangle (optionally clipped to a disk):
/// outer in y, inner in x.
template <class F>
QuadResult integrate_rect(F&& f, const RectPlan& plan) {
    const Rect& R = plan.rect;
    if (R.empty()) return {};
    double y_hi = R.y1;
    if (plan.radius) y_hi = std::min(y_hi, *plan.radius);
    if (!(y_hi > R.y0)) return {};
    const double inner_tol = plan.tolerance * 0.05;
    bool inner_ok = true;

    auto inner = [&](double y, double log_w) {
        double lo = R.x0;
        double hi = R.x1;
        if (plan.radius) {
            const double r2 = (*plan.radius) * (*plan.radius) - y * y;
            if (!(r2 > 0.0)) return 0.0;
            const double half = std::sqrt(r2);
            lo = std::max(lo, -half);
            hi = std::min(hi, half);
        }
        if (!(hi > lo)) return 0.0;
        auto g = [&](double x, double lw) { return f(x, y, log_w + lw); };
        auto r = detail::integrate_peaked(g, lo, hi, plan.x_peaks, y, inner_tol, plan.max_intervals);
        if (!r.converged) inner_ok = false;
        return r.value;
    };

    std::vector<double> pts{R.y0, y_hi};
    for (double b : plan.y_breaks) {
        if (b > R.y0 && b < y_hi) pts.push_back(b);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    CompensatedSum value, error;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        QuadResult r;
        if (a <= 0.0) {
            // y = b v^{2/(tau+1)} absorbs y^tau and logarithmic factors at the axis.
            const double tau = std::min(plan.axis_exponent, 0.0);
            const double inv = 2.0 / (tau + 1.0);
            auto g = [&](double v) {
                const double lv = std::log(v);
                const double y = b * std::exp(inv * lv);
                if (!(y > 0.0)) return 0.0;
                return inner(y, std::log(b * inv) + (inv - 1.0) * lv);
            };
            r = integrate_adaptive(g, 0.0, 1.0, plan.tolerance, 0.0, plan.max_intervals);
        } else {
            auto g = [&](double s) {
                const double y = std::exp(s);
                return inner(y, s);
            };
            r = integrate_adaptive(g, std::log(a), std::log(b), plan.tolerance, 0.0, plan.max_intervals);
        }
        value.add(r.value);
        error.add(r.error);
        ok = ok && r.converged;
    }
    return {value.value(), error.value(), ok && inner_ok};
}

// --------------------------------------------------------- the cell engine

using PointFunction = std::function<double(double x, double y)>;

/// Adaptive tensor Gauss-Legendre cell integration of a pointwise function over a
/// rectangle clipped to the truncation of qc. The base mesh has qc.x_cells columns
/// and geometric layers in y; a cell's error is the difference between its own
/// rule and the sum of its four children (two-level Richardson comparison).
/// Throws DomainError on a non-finite sample.
IntegralResult integrate(const PointFunction& f, const Rect& region, const QuadratureConfig& qc);
IntegralResult integrate(const PointFunction& f, const CarlesonBox& box, const QuadratureConfig& qc);
IntegralResult integrate(const PointFunction& f, const Tent& tent, const QuadratureConfig& qc);

// ------------------------------------------------------------ tail bounds

/// Integral over {|z| > R} of |z|^{-decay} y^nu dxdy, in closed form.
/// Throws DivergenceError unless decay > nu + 2.
double tail_bound_radial(double decay, double nu, double radius);

/// Integral over [x0, x1] x (0, h) of y^nu dxdy. Throws DivergenceError unless nu > -1.
double tail_bound_height(double nu, double height, double width);

/// Integral of sin(theta)^t over (0, pi); requires t > -1.
double sine_power_integral(double t);

}  // namespace bergman
