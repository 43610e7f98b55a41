#pragma once

#include <cstddef>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbolic.hpp"

namespace bergman {

/// Exponents (p, q, alpha, a) with 1 < p <= q, alpha > -1, 0 <= a < 2 + alpha.
struct ExponentConfig {
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    double a = 0.0;
    bool balanced = false;  // require 1/p - 1/q = a/(2+alpha)

    /// q from 1/q = 1/p - a/(2+alpha).
    static ExponentConfig make_balanced(double p, double alpha, double a);

    double p_conj() const noexcept { return p / (p - 1.0); }
    double q_conj() const noexcept { return q / (q - 1.0); }
    double gap() const noexcept { return a / (2.0 + alpha); }

    void validate() const;
};

/// omega together with sigma = omega^{-p'} and u = omega^q.
struct WeightPair {
    SymbolicFunction omega;
    SymbolicFunction sigma;
    SymbolicFunction u;

    WeightPair(SymbolicFunction omega, const ExponentConfig& cfg);
};

/// Finite family of intervals replacing the supremum over all intervals:
/// dyadic intervals of both grids with |j| <= depth lying in [x_min, x_max] and
/// within origin_factor lengths of the origin, plus intervals centred at 0 with
/// lengths 2^{k/2}, |k| <= 2 depth.
struct SearchFamily {
    int depth = 12;
    double x_min = -64.0;
    double x_max = 64.0;
    double origin_factor = 4.0;
    bool dyadic = true;
    bool centered = true;

    /// Sorted lexicographically. With `homogeneous`, intervals with equal
    /// left/length are merged (dilation about 0 leaves the bracket unchanged),
    /// keeping the one whose length is closest to 1.
    std::vector<Interval> intervals(bool homogeneous) const;
    void validate() const;
};

struct WeightConstant {
    double value = 0.0;
    Interval argmax{0.0, 1.0};
    std::size_t intervals = 0;
};

/// (|I|^{-(2+a)} int_{Q_I} omega^q dV_a)(|I|^{-(2+a)} int_{Q_I} omega^{-p'} dV_a)^{q/p'}.
double bpq_bracket(const WeightPair& w, const ExponentConfig& cfg, const Interval& I, const QuadratureConfig& qc);

/// (|I|^{-(2+a)} int_{Q_I} omega dV_a)(|I|^{-(2+a)} int_{Q_I} omega^{1-p'} dV_a)^{p-1}.
double bp_bracket(const SymbolicFunction& omega, double p, double alpha, const Interval& I,
                  const QuadratureConfig& qc);

/// Maximum of bpq_bracket over the search family. Ties go to the lexicographically
/// first interval. Throws WeightNotInClassError naming the interval on divergence.
WeightConstant bpq_constant(const WeightPair& w, const ExponentConfig& cfg, const SearchFamily& search,
                            const QuadratureConfig& qc);

WeightConstant bp_constant(const SymbolicFunction& omega, double p, double alpha, const SearchFamily& search,
                           const QuadratureConfig& qc);

/// (1/|Q_I|_{sigma,alpha}) int_{Q_I} f sigma dV_alpha.
double box_average_sigma(const SymbolicFunction& f, const Interval& I, const WeightPair& w, double alpha,
                         const QuadratureConfig& qc);

/// (1/|Q_I|_{u,alpha}^{1-a/(2+alpha)}) int_{Q_I} g u dV_alpha.
double box_average_u_fractional(const SymbolicFunction& g, const Interval& I, const WeightPair& w,
                                const ExponentConfig& cfg, const QuadratureConfig& qc);

}  // namespace bergman
