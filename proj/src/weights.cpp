#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bergman/error.hpp"
#include "bergman/measure.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

ExponentConfig ExponentConfig::make_balanced(double p, double alpha, double a) {
    ExponentConfig c;
    c.p = p;
    c.alpha = alpha;
    c.a = a;
    c.balanced = true;
    const double inv_q = 1.0 / p - a / (2.0 + alpha);
    if (!(inv_q > 0.0)) {
        throw InputError("no finite q with 1/p - 1/q = a/(2+alpha) for p=" + format_double(p) +
                         ", a=" + format_double(a) + ", alpha=" + format_double(alpha));
    }
    c.q = 1.0 / inv_q;
    c.validate();
    return c;
}

void ExponentConfig::validate() const {
    auto bad = [](const std::string& what) { throw InputError("exponents: " + what); };
    if (!(p > 1.0) || !std::isfinite(p)) bad("p must lie in (1, inf), got " + format_double(p));
    if (!(q >= p) || !std::isfinite(q)) bad("q must lie in [p, inf), got q=" + format_double(q));
    if (!(alpha > -1.0)) bad("alpha must exceed -1, got " + format_double(alpha));
    if (!(a >= 0.0 && a < 2.0 + alpha)) bad("a must lie in [0, 2+alpha), got " + format_double(a));
    if (balanced) {
        const double defect = 1.0 / p - 1.0 / q - gap();
        if (std::fabs(defect) > 16.0 * std::numeric_limits<double>::epsilon()) {
            bad("not balanced: 1/p - 1/q - a/(2+alpha) = " + format_double(defect));
        }
    }
}

WeightPair::WeightPair(SymbolicFunction w, const ExponentConfig& cfg)
    : omega(std::move(w)), sigma(omega.power(-cfg.p_conj())), u(omega.power(cfg.q)) {}

void SearchFamily::validate() const {
    if (depth < 0) throw InputError("search depth must be nonnegative");
    if (!(x_min < x_max)) throw InputError("search x-range is empty");
    if (!(origin_factor >= 0.0)) throw InputError("search origin factor must be nonnegative");
    if (!dyadic && !centered) throw InputError("search family is empty");
}

std::vector<Interval> SearchFamily::intervals(bool homogeneous) const {
    validate();
    std::vector<Interval> out;
    if (dyadic) {
        for (double beta : {0.0, 1.0 / 3.0}) {
            for (int j = -depth; j <= depth; ++j) {
                const double L = std::ldexp(1.0, j);
                const double shift = (j % 2 == 0) ? beta : -beta;
                const long m_lo = static_cast<long>(std::floor(-origin_factor - 2.0));
                const long m_hi = static_cast<long>(std::ceil(origin_factor + 1.0));
                for (long m = m_lo; m <= m_hi; ++m) {
                    Interval I(L * (static_cast<double>(m) + shift), L);
                    if (I.left() < x_min || I.right() > x_max) continue;
                    if (I.distance_to_origin() > origin_factor * L) continue;
                    out.push_back(I);
                }
            }
        }
    }
    if (centered) {
        for (int k = -2 * depth; k <= 2 * depth; ++k) {
            const double L = std::exp2(0.5 * k);
            if (-0.5 * L < x_min || 0.5 * L > x_max) continue;
            out.emplace_back(-0.5 * L, L);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!homogeneous) return out;

    // One representative per ratio left/length.
    std::vector<std::pair<double, Interval>> keyed;
    for (const auto& I : out) keyed.emplace_back(I.left() / I.length(), I);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        const double dx = std::fabs(std::log2(x.second.length()));
        const double dy = std::fabs(std::log2(y.second.length()));
        if (dx != dy) return dx < dy;
        return x.second.length() < y.second.length();
    });
    std::vector<Interval> reduced;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) reduced.push_back(keyed[i].second);
    }
    std::sort(reduced.begin(), reduced.end());
    return reduced;
}

namespace {

double box_integral(const NormalForm& f, double alpha, const Interval& I, const QuadratureConfig& qc,
                    const char* what) {
    try {
        const Rect r{I.left(), I.right(), 0.0, I.length()};
        IntegralResult res = integrate_function(f, alpha, qc, r);
        if (!res.converged) {
            std::ostringstream os;
            os << "integral of " << what << " over the box of " << to_string(I) << " did not converge";
            throw ToleranceError(os.str(), res.value, res.error_estimate);
        }
        return res.value;
    } catch (const DivergenceError& e) {
        throw WeightNotInClassError(std::string(what) + " is not integrable on the box of " + to_string(I) +
                                    ": " + e.what());
    }
}

double denominator(const NormalForm& f, double alpha, const Interval& I, const QuadratureConfig& qc,
                   const char* what) {
    try {
        return box_integral(f, alpha, I, qc, what);
    } catch (const WeightNotInClassError& e) {
        throw DegenerateAverageError(e.what());
    }
}

WeightConstant maximize(const std::vector<Interval>& family, const std::function<double(const Interval&)>& f) {
    auto values = parallel_map(family.size(), [&](std::size_t i) { return f(family[i]); });
    WeightConstant best;
    best.intervals = family.size();
    best.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (values[i] > best.value) {
            best.value = values[i];
            best.argmax = family[i];
        }
    }
    return best;
}

}  // namespace

double bpq_bracket(const WeightPair& w, const ExponentConfig& cfg, const Interval& I, const QuadratureConfig& qc) {
    const double norm = std::pow(I.length(), 2.0 + cfg.alpha);
    const double iu = box_integral(w.u.normal_form(), cfg.alpha, I, qc, "omega^q");
    const double is = box_integral(w.sigma.normal_form(), cfg.alpha, I, qc, "omega^{-p'}");
    return (iu / norm) * std::pow(is / norm, cfg.q / cfg.p_conj());
}

double bp_bracket(const SymbolicFunction& omega, double p, double alpha, const Interval& I,
                  const QuadratureConfig& qc) {
    const double pc = p / (p - 1.0);
    const double norm = std::pow(I.length(), 2.0 + alpha);
    const double iw = box_integral(omega.normal_form(), alpha, I, qc, "omega");
    const double id = box_integral(omega.power(1.0 - pc).normal_form(), alpha, I, qc, "omega^{1-p'}");
    return (iw / norm) * std::pow(id / norm, p - 1.0);
}

WeightConstant bpq_constant(const WeightPair& w, const ExponentConfig& cfg, const SearchFamily& search,
                            const QuadratureConfig& qc) {
    cfg.validate();
    const bool homogeneous = w.u.normal_form().homogeneous() && w.sigma.normal_form().homogeneous();
    return maximize(search.intervals(homogeneous),
                    [&](const Interval& I) { return bpq_bracket(w, cfg, I, qc); });
}

WeightConstant bp_constant(const SymbolicFunction& omega, double p, double alpha, const SearchFamily& search,
                           const QuadratureConfig& qc) {
    if (!(p > 1.0)) throw InputError("p must exceed 1, got " + format_double(p));
    if (!(alpha > -1.0)) throw InputError("alpha must exceed -1, got " + format_double(alpha));
    const bool homogeneous = omega.normal_form().homogeneous();
    return maximize(search.intervals(homogeneous),
                    [&](const Interval& I) { return bp_bracket(omega, p, alpha, I, qc); });
}

double box_average_sigma(const SymbolicFunction& f, const Interval& I, const WeightPair& w, double alpha,
                         const QuadratureConfig& qc) {
    const NormalForm sigma = w.sigma.normal_form();
    const double den = denominator(sigma, alpha, I, qc, "sigma");
    if (!(den > 0.0) || !std::isfinite(den)) {
        throw DegenerateAverageError("sigma-measure of the box of " + to_string(I) + " is " + format_double(den));
    }
    return box_integral(f.normal_form() * sigma, alpha, I, qc, "f sigma") / den;
}

double box_average_u_fractional(const SymbolicFunction& g, const Interval& I, const WeightPair& w,
                                const ExponentConfig& cfg, const QuadratureConfig& qc) {
    const NormalForm u = w.u.normal_form();
    const double den = denominator(u, cfg.alpha, I, qc, "u");
    if (!(den > 0.0) || !std::isfinite(den)) {
        throw DegenerateAverageError("u-measure of the box of " + to_string(I) + " is " + format_double(den));
    }
    return box_integral(g.normal_form() * u, cfg.alpha, I, qc, "g u") / std::pow(den, 1.0 - cfg.gap());
}

}  // namespace bergman
