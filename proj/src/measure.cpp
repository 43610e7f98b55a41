#include "bergman/measure.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {

namespace {

void require_measure(double alpha) {
    if (!(alpha > -1.0)) {
        throw DomainError("measure y^alpha dxdy is not locally finite for alpha = " + format_double(alpha) +
                          " (need alpha > -1)");
    }
}

std::string exps(double s, double t) {
    return "|z|^" + format_double(s) + " y^" + format_double(t);
}

/// Ray parameters [lo, hi] of the ray at angle theta inside rect and the disk.
bool ray_range(double c, double sn, const Rect& r, double radius, double& lo, double& hi) {
    lo = 0.0;
    hi = radius;
    if (c > 0.0) {
        lo = std::max(lo, r.x0 / c);
        hi = std::min(hi, r.x1 / c);
    } else if (c < 0.0) {
        lo = std::max(lo, r.x1 / c);
        hi = std::min(hi, r.x0 / c);
    } else if (r.x0 > 0.0 || r.x1 < 0.0) {
        return false;
    }
    if (sn > 0.0) {
        lo = std::max(lo, r.y0 / sn);
        hi = std::min(hi, r.y1 / sn);
    }
    return hi > lo;
}

}  // namespace

double alpha_measure_box(const Interval& I, double alpha) {
    require_measure(alpha);
    return std::pow(I.length(), 2.0 + alpha) / (1.0 + alpha);
}

double alpha_measure_tent(const Interval& I, double alpha) {
    require_measure(alpha);
    return std::pow(I.length(), 2.0 + alpha) * -std::expm1(-(1.0 + alpha) * std::numbers::ln2) / (1.0 + alpha);
}

double rect_height_moment(const Rect& r, double nu) {
    if (r.empty()) return 0.0;
    if (r.y0 <= 0.0) {
        require_measure(nu);
        return (r.x1 - r.x0) * std::pow(r.y1, nu + 1.0) / (nu + 1.0);
    }
    if (nu == -1.0) return (r.x1 - r.x0) * std::log(r.y1 / r.y0);
    return (r.x1 - r.x0) * (std::pow(r.y1, nu + 1.0) - std::pow(r.y0, nu + 1.0)) / (nu + 1.0);
}

QuadResult integrate_monomial(double s, double t, const std::optional<Rect>& rect,
                              const std::optional<double>& radius, double tolerance, int max_intervals) {
    const double k = s + t + 2.0;
    if (!rect) {
        if (!radius) throw DivergenceError(exps(s, t) + " is not integrable over the whole half-plane");
        if (!(t > -1.0)) throw DivergenceError(exps(s, t) + " is not integrable at the real axis");
        if (!(k > 0.0)) throw DivergenceError(exps(s, t) + " is not integrable at the origin");
        return {sine_power_integral(t) * std::pow(*radius, k) / k, 0.0, true};
    }
    const Rect r = *rect;
    if (r.empty()) return {};
    double R = std::numeric_limits<double>::infinity();
    if (radius) {
        const double far = std::max(std::hypot(r.x0, r.y1), std::hypot(r.x1, r.y1));
        const double near_x = std::clamp(0.0, r.x0, r.x1);
        const double near = std::hypot(near_x, r.y0);
        if (near >= *radius) return {};
        if (far > *radius) R = *radius;
    }
    const bool origin = r.touches_origin();
    if (r.y0 <= 0.0 && !(t > -1.0)) {
        throw DivergenceError(exps(s, t) + " is not integrable at the real axis");
    }
    if (origin && !(k > 0.0)) throw DivergenceError(exps(s, t) + " is not integrable at the origin");

    constexpr double pi = std::numbers::pi;
    double ta, tb;
    std::vector<double> angles;
    const double cx[2] = {r.x0, r.x1};
    const double cy[2] = {r.y0, r.y1};
    if (origin) {
        ta = r.x1 > 0.0 ? 0.0 : pi / 2.0;
        tb = r.x0 < 0.0 ? pi : pi / 2.0;
        for (double x : cx) {
            for (double y : cy) {
                if (x != 0.0 || y != 0.0) angles.push_back(std::atan2(y, x));
            }
        }
    } else {
        ta = pi;
        tb = 0.0;
        for (double x : cx) {
            for (double y : cy) {
                const double a = std::atan2(y, x);
                angles.push_back(a);
                ta = std::min(ta, a);
                tb = std::max(tb, a);
            }
        }
    }
    if (std::isfinite(R)) {
        for (double y : cy) {
            if (y > 0.0 && y < R) {
                const double x = std::sqrt(R * R - y * y);
                for (double xx : {x, -x}) {
                    if (xx >= r.x0 && xx <= r.x1) angles.push_back(std::atan2(y, xx));
                }
            }
        }
        for (double x : cx) {
            if (std::fabs(x) < R) {
                const double y = std::sqrt(R * R - x * x);
                if (y >= r.y0 && y <= r.y1) angles.push_back(std::atan2(y, x));
            }
        }
    }
    std::vector<double> pts{ta, tb};
    for (double a : angles) {
        if (a > ta && a < tb) pts.push_back(a);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto radial = [&](double theta) {
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        double lo, hi;
        if (!(sn > 0.0) || !ray_range(c, sn, r, R, lo, hi)) return 0.0;
        const double ang = t == 0.0 ? 1.0 : std::pow(sn, t);
        if (k == 0.0) return ang * std::log(hi / lo);
        return ang * (std::pow(hi, k) - std::pow(lo, k)) / k;
    };

    CompensatedSum value, error;
    bool ok = true;
    const bool singular = t < 0.0;
    const double inv = singular ? 1.0 / (t + 1.0) : 1.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        QuadResult q;
        if (singular && a == 0.0) {
            // theta = b v^{1/(t+1)}
            auto g = [&](double v) {
                const double lv = std::log(v);
                const double th = b * std::exp(inv * lv);
                return radial(th) * b * inv * std::exp((inv - 1.0) * lv);
            };
            q = integrate_adaptive(g, 0.0, 1.0, tolerance, 0.0, max_intervals);
        } else if (singular && b == pi) {
            const double w = pi - a;
            auto g = [&](double v) {
                const double lv = std::log(v);
                const double th = pi - w * std::exp(inv * lv);
                return radial(th) * w * inv * std::exp((inv - 1.0) * lv);
            };
            q = integrate_adaptive(g, 0.0, 1.0, tolerance, 0.0, max_intervals);
        } else {
            q = integrate_adaptive(radial, a, b, tolerance, 0.0, max_intervals);
        }
        value.add(q.value);
        error.add(q.error);
        ok = ok && q.converged;
    }
    return {value.value(), error.value(), ok};
}

IntegralResult integrate_function(const NormalForm& f, double nu, const QuadratureConfig& qc,
                                  const std::optional<Rect>& region) {
    require_measure(nu);
    NormalForm g = f;
    if (region) g.support = g.support ? intersect(*g.support, *region) : *region;
    if (g.is_zero()) return {};
    const double c = std::fabs(g.coefficient);
    const double s = g.modulus_exponent;
    const double t = g.height_exponent + nu;
    QuadResult q;
    if (g.shifts.empty() && s == 0.0 && g.support && !g.radius) {
        const Rect& r = *g.support;
        if (r.y0 <= 0.0 && !(t > -1.0)) throw DivergenceError(exps(s, t) + " is not integrable at the real axis");
        q = {rect_height_moment(r, t), 0.0, true};
    } else if (g.shifts.empty()) {
        q = integrate_monomial(s, t, g.support, g.radius, qc.tolerance, qc.max_intervals);
    } else {
        auto integrand = [&](double x, double y, double log_w) {
            const double l = g.log_abs(x, y);
            if (l == -std::numeric_limits<double>::infinity()) return 0.0;
            return std::exp(l + nu * std::log(y) + log_w);
        };
        const bool origin = g.support_touches_origin();
        if (origin && !(s + t + 2.0 > 0.0)) {
            throw DivergenceError(exps(s, t) + " times kernel factors is not integrable at the origin");
        }
        if (g.support) {
            const Rect& r = *g.support;
            if (r.y0 <= 0.0 && !(t > -1.0)) {
                throw DivergenceError(exps(s, t) + " is not integrable at the real axis");
            }
            RectPlan plan;
            plan.rect = r;
            plan.radius = g.radius;
            plan.axis_exponent = t + ((origin && s < -1.0) ? s + 1.0 : 0.0);
            if (s != 0.0 && r.x0 <= 0.0 && 0.0 <= r.x1) plan.x_peaks.push_back(0.0);
            for (const auto& k : g.shifts) plan.y_breaks.push_back(k.shift);
            plan.tolerance = qc.tolerance;
            plan.max_intervals = qc.max_intervals;
            q = integrate_rect(integrand, plan);
        } else {
            if (!(t > -1.0)) throw DivergenceError(exps(s, t) + " is not integrable at the real axis");
            PolarPlan plan;
            plan.origin_exponent = s + t + 2.0;
            if (g.radius) {
                plan.outer_radius = *g.radius;
            } else {
                plan.infinity_exponent = -(g.degree_at_infinity() + nu + 2.0);
                if (!(plan.infinity_exponent > 0.0)) {
                    std::ostringstream os;
                    os << "function decays like |z|^" << g.degree_at_infinity()
                       << ", not integrable at infinity against y^" << nu;
                    throw DivergenceError(os.str());
                }
            }
            plan.axis_exponent = t;
            for (const auto& k : g.shifts) plan.radial_breaks.push_back(k.shift);
            plan.symmetric = true;
            plan.tolerance = qc.tolerance;
            plan.max_intervals = qc.max_intervals;
            q = integrate_polar(integrand, plan);
        }
        // log_abs already carries the coefficient
        return {q.value, q.error, 0.0, q.converged};
    }
    return {c * q.value, c * q.error, 0.0, q.converged};
}

double integrate_function_checked(const NormalForm& f, double nu, const QuadratureConfig& qc,
                                  const std::optional<Rect>& region) {
    IntegralResult r = integrate_function(f, nu, qc, region);
    if (!r.converged) {
        std::ostringstream os;
        os << "integral did not reach relative tolerance " << qc.tolerance << " (estimate " << r.value
           << ", error " << r.error_estimate << ")";
        throw ToleranceError(os.str(), r.value, r.error_estimate);
    }
    return r.value;
}

namespace {

IntegralResult region_measure(const Rect& rect, const SymbolicFunction& w, double alpha,
                              const QuadratureConfig& qc) {
    require_measure(alpha);
    IntegralResult r = integrate_function(w.normal_form(), alpha, qc, rect);
    if (!r.converged) {
        std::ostringstream os;
        os << "weighted measure of [" << rect.x0 << ", " << rect.x1 << ") x [" << rect.y0 << ", " << rect.y1
           << ") did not converge";
        throw ToleranceError(os.str(), r.value, r.error_estimate);
    }
    return r;
}

}  // namespace

IntegralResult weighted_region_measure(const CarlesonBox& box, const SymbolicFunction& w, double alpha,
                                       const QuadratureConfig& qc) {
    return region_measure(box.rect(), w, alpha, qc);
}

IntegralResult weighted_region_measure(const Tent& tent, const SymbolicFunction& w, double alpha,
                                       const QuadratureConfig& qc) {
    return region_measure(tent.rect(), w, alpha, qc);
}

double lp_norm(const NormalForm& f, double p, double nu, const QuadratureConfig& qc) {
    if (!(p >= 1.0)) throw InputError("lp_norm: p must be at least 1, got " + format_double(p));
    return std::pow(integrate_function_checked(f.abs_pow(p), nu, qc), 1.0 / p);
}

double lp_norm(const SymbolicFunction& f, double p, double nu, const QuadratureConfig& qc) {
    return lp_norm(f.normal_form(), p, nu, qc);
}

}  // namespace bergman
