#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bergman/dyadic.hpp"
#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbolic.hpp"
#include "bergman/weights.hpp"

namespace bergman {

enum class OperatorKind { PositiveBergman, FractionalS, FractionalT, GeneralTPlus };

/// Positive kernel operators f -> (Im z)^{a_out} int f(w) |z - conj w|^{-m} (Im w)^{alpha_w} dA(w).
///   PositiveBergman(alpha): a_out = 0, m = 2 + alpha, alpha_w = alpha
///   FractionalS(alpha, a):  a_out = a, m = 2 + alpha, alpha_w = alpha
///   FractionalT(alpha, a):  a_out = 0, m = 2 + alpha - a, alpha_w = alpha
///   GeneralTPlus(a, b):     a_out = 0, m = 1 + b, alpha_w = a
struct OperatorSpec {
    OperatorKind kind = OperatorKind::PositiveBergman;
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;

    static OperatorSpec positive_bergman(double alpha) { return {OperatorKind::PositiveBergman, alpha, 0.0, 0.0}; }
    static OperatorSpec fractional_s(double alpha, double a) { return {OperatorKind::FractionalS, alpha, a, 0.0}; }
    static OperatorSpec fractional_t(double alpha, double a) { return {OperatorKind::FractionalT, alpha, a, 0.0}; }
    static OperatorSpec general_t_plus(double a, double b) { return {OperatorKind::GeneralTPlus, 0.0, a, b}; }

    double output_height_exponent() const noexcept;
    double kernel_exponent() const noexcept;
    double source_height_exponent() const noexcept;

    void validate() const;
    std::string name() const;
};

/// mantissa * exp(log_scale); keeps values far outside the double range usable.
struct OperatorValue {
    double mantissa = 0.0;
    double log_scale = 0.0;
    double error = 0.0;  // absolute, in units of the mantissa
    bool converged = true;

    double value() const noexcept { return mantissa * std::exp(log_scale); }
    double log_value() const noexcept { return std::log(mantissa) + log_scale; }
};

/// (op f)(z) for f >= 0 (|f| is integrated). Throws DivergenceError when the defining
/// integral is infinite, decided from the exponents of f against the kernel.
OperatorValue apply(const OperatorSpec& op, const NormalForm& f, const HalfPlanePoint& z, const QuadratureConfig& qc);
OperatorValue apply(const OperatorSpec& op, const SymbolicFunction& f, const HalfPlanePoint& z,
                    const QuadratureConfig& qc = {});

struct NormResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// ||W op f||_{L^q(y^nu dxdy)} over H, or over `region` when given (bounded, y0 > 0
/// or touching the axis). The inner applications use tolerance qc.tolerance / 100.
NormResult operator_norm(const OperatorSpec& op, const SymbolicFunction& f, double q, const SymbolicFunction& W,
                         double nu, const QuadratureConfig& qc, const std::optional<Rect>& region = std::nullopt);
NormResult operator_norm(const OperatorSpec& op, const NormalForm& f, double q, const SymbolicFunction& W, double nu,
                         const QuadratureConfig& qc, const std::optional<Rect>& region = std::nullopt);

/// ||W f||_{L^p(y^nu dxdy)} over H or `region`.
NormResult function_norm(const SymbolicFunction& f, double p, const SymbolicFunction& W, double nu,
                         const QuadratureConfig& qc, const std::optional<Rect>& region = std::nullopt);
NormResult function_norm(const NormalForm& f, double p, const SymbolicFunction& W, double nu,
                         const QuadratureConfig& qc, const std::optional<Rect>& region = std::nullopt);

struct NormRatio {
    double source = 0.0;
    double target = 0.0;
    double ratio = 0.0;
    bool converged = true;
};

struct NormSpaces {
    SymbolicFunction source_weight;  // multiplier: the source norm is ||source_weight f||
    SymbolicFunction target_weight;
    double source_order = 0.0;       // nu_1 in y^{nu_1} dxdy
    double target_order = 0.0;
};

/// ||op f||_target / ||f||_source with exponents cfg.p (source) and cfg.q (target).
NormRatio norm_ratio(const OperatorSpec& op, const SymbolicFunction& f, const ExponentConfig& cfg,
                     const NormSpaces& spaces, const QuadratureConfig& qc,
                     const std::optional<Rect>& region = std::nullopt);

struct MinorizationReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_ratio = 0.0;  // max of M f / S|f| over samples with S|f| > 0
    std::optional<HalfPlanePoint> worst;
};

/// Checks M_{alpha,a} f(z) <= S_{alpha,a}|f|(z) (1 + slack) at each sample, with the
/// unweighted fractional maximal function over the grid.
MinorizationReport maximal_minorization_check(const SymbolicFunction& f, const ExponentConfig& cfg,
                                              const TruncatedGrid& g, const std::vector<HalfPlanePoint>& samples,
                                              const QuadratureConfig& qc = {}, double slack = 1e-6);

}  // namespace bergman
