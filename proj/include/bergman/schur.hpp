#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bergman/fit.hpp"
#include "bergman/geometry.hpp"
#include "bergman/operators.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbolic.hpp"

namespace bergman {

/// T+ from L^p(y^alpha_src) into L^q(y^beta_tgt), with b fixed by the exponents.
struct OffDiagonalConfig {
    double p = 2.0;
    double q = 2.0;
    double alpha_src = 0.0;
    double beta_tgt = 0.0;
    double a = 0.0;

    /// beta_tgt = alpha + (2 + alpha)(q/p - 1), the target order of P+_alpha.
    static OffDiagonalConfig with_default_target(double p, double q, double alpha, double a);

    double p_conj() const noexcept { return p / (p - 1.0); }
    /// b = a + 1 - (alpha+2)/p + (beta+2)/q
    double b() const noexcept;
    /// a - b - alpha - 1 = -((alpha+2)/p' + (beta+2)/q)
    double omega_param() const noexcept;
    OperatorSpec op() const noexcept { return OperatorSpec::general_t_plus(a, b()); }

    void validate() const;
};

/// alpha + 1 < p(a + 1), strict.
bool admissibility(const OffDiagonalConfig& cfg);

/// Exact condition for the power test functions below to exist: admissibility, and when
/// a < alpha also (alpha - a)(beta + 2) < (beta + 1)((alpha+2)/p' + (beta+2)/q).
bool schur_construction_feasible(const OffDiagonalConfig& cfg);

/// Test functions phi1 = y^{-s}, phi2 = y^{-r} and the split exponent t.
struct SchurParameters {
    double r = 0.0;
    double s = 0.0;
    double t = 0.0;
    double one_minus_t = 0.0;
};

/// t = (-(alpha+2)/p' + s - r) / omega_param, 1 - t = (r - s - (beta+2)/q) / omega_param.
SchurParameters schur_parameters(const OffDiagonalConfig& cfg, double r, double s);

struct Constraint {
    std::string name;
    double slack = 0.0;  // strictly positive when satisfied
};

/// Slacks of every strict inequality the parameters must satisfy:
/// 0 < r < (beta+1)/q, s < r, -(a-alpha)(1-t) < s < (alpha+1)/p' + (a-alpha)t, 0 < t < 1.
std::vector<Constraint> schur_constraints(const OffDiagonalConfig& cfg, const SchurParameters& sp);

/// Grid scan of (0, (beta+1)/q) x (s-range of the feasible polygon) with 256 steps per side,
/// keeping the point with the largest minimum slack (ties: smallest (r, s)).
/// Throws InfeasibleError when the exponents are not admissible or the region is empty
/// (see schur_construction_feasible).
SchurParameters solve_rst(const OffDiagonalConfig& cfg);

/// t(1+b)p' + sp' - (a-alpha)tp' - alpha - 2 - rp', zero up to rounding.
double first_chain_defect(const OffDiagonalConfig& cfg, const SchurParameters& sp);
/// (1+b)(1-t)q + rq - beta - 2 - q[(a-alpha)(1-t) + s], zero up to rounding.
double second_chain_defect(const OffDiagonalConfig& cfg, const SchurParameters& sp);

struct SchurReport {
    std::vector<HalfPlanePoint> samples;
    std::vector<double> first_ratio;   // int K^{tp'} phi1^{p'} dV_alpha / phi2^{p'}
    std::vector<double> second_ratio;  // int K^{(1-t)q} phi2^q dV_beta / phi1^q
    double first_spread = 0.0;         // max / min - 1
    double second_spread = 0.0;
    double m1 = 0.0;                   // (max first ratio)^{1/p'}
    double m2 = 0.0;                   // (max second ratio)^{1/q}
    bool converged = true;
};

/// Evaluates both Schur integrals at the samples. A divergent integral means the
/// parameters violate their constraints and is rethrown as DivergenceError.
SchurReport verify_schur_conditions(const OffDiagonalConfig& cfg, const SchurParameters& sp,
                                    const std::vector<HalfPlanePoint>& samples, const QuadratureConfig& qc = {});

/// int_H y^e |z - conj w|^{-k} dA(w), by quadrature.
OperatorValue height_kernel_integral(double e, double k, const HalfPlanePoint& z, const QuadratureConfig& qc);

struct SchurBound {
    double source = 0.0;  // ||f||_{p, alpha}
    double target = 0.0;  // ||T+ f||_{q, beta}
    double bound = 0.0;   // m1 m2 ||f||_{p, alpha}
    bool converged = true;
};

SchurBound schur_bound(const OffDiagonalConfig& cfg, const SchurReport& report, const SymbolicFunction& f,
                       const QuadratureConfig& qc);

struct LemmaScaling {
    std::vector<double> t_values;
    std::vector<double> norms;  // ||((z + it)/i)^{-gamma}||_{p,nu}^p
    FitResult fit;
    double expected_slope = 0.0;  // -p gamma + nu + 2
};

/// Throws DivergenceError unless nu > -1 and gamma > (nu + 2)/p.
LemmaScaling lemma_norm_scaling(double p, double nu, double gamma, const std::vector<double>& t_values,
                                const QuadratureConfig& qc = {});

}  // namespace bergman
