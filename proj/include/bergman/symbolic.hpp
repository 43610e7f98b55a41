#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

// Closed-form function family on the upper half-plane. Every function is a
// product of atoms, so products of products flatten and evaluation is exact.

struct Scalar {
    double value = 1.0;
    friend bool operator==(const Scalar&, const Scalar&) = default;
};

/// |z|^s
struct PowerOfModulus {
    double exponent = 0.0;
    friend bool operator==(const PowerOfModulus&, const PowerOfModulus&) = default;
};

/// y^s
struct PowerOfHeight {
    double exponent = 0.0;
    friend bool operator==(const PowerOfHeight&, const PowerOfHeight&) = default;
};

/// |z|^s on {|z| <= radius}, zero outside.
struct TruncatedPower {
    double exponent = 0.0;
    double radius = 1.0;
    friend bool operator==(const TruncatedPower&, const TruncatedPower&) = default;
};

/// |(z + it)/i|^{-gamma} = |z + it|^{-gamma}, t > 0.
struct ShiftedKernelPower {
    double shift = 1.0;
    double exponent = 0.0;
    friend bool operator==(const ShiftedKernelPower&, const ShiftedKernelPower&) = default;
};

/// Indicator of the Carleson box Q_I.
struct BoxIndicator {
    Interval base{0.0, 1.0};
    friend bool operator==(const BoxIndicator&, const BoxIndicator&) = default;
};

using Atom = std::variant<Scalar, PowerOfModulus, PowerOfHeight, TruncatedPower, ShiftedKernelPower,
                          BoxIndicator>;

struct KernelShift {
    double shift = 1.0;
    double exponent = 0.0;  // the factor is |z + i shift|^{-exponent}
    friend bool operator==(const KernelShift&, const KernelShift&) = default;
};

/// Canonical form c |z|^s y^t 1_{|z|<=R} 1_{rect} prod_k |z + i t_k|^{-g_k}.
/// Closed under products and real powers of the absolute value, which is all
/// the integration routines need.
struct NormalForm {
    double coefficient = 1.0;
    double modulus_exponent = 0.0;
    double height_exponent = 0.0;
    std::optional<double> radius;
    std::optional<Rect> support;
    std::vector<KernelShift> shifts;

    bool is_zero() const noexcept;
    bool homogeneous() const noexcept { return !radius && !support && shifts.empty(); }
    bool bounded_support() const noexcept { return radius.has_value() || support.has_value(); }
    /// Degree of the growth near the origin: f ~ |z|^{s + t}.
    double degree_at_origin() const noexcept { return modulus_exponent + height_exponent; }
    /// Degree of the growth at infinity: f ~ |z|^{s + t - sum g_k}.
    double degree_at_infinity() const noexcept;
    /// The origin lies in the closure of the support.
    bool support_touches_origin() const noexcept;

    /// log |f(x + iy)|, -inf outside the support.
    double log_abs(double x, double y) const noexcept;
    double evaluate(double x, double y) const noexcept;

    /// |f|^p. Throws InputError for p < 0 when the support is bounded.
    NormalForm abs_pow(double p) const;

    friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
};

class SymbolicFunction {
public:
    SymbolicFunction() : atoms_{Scalar{1.0}} {}
    SymbolicFunction(Atom atom) : atoms_{std::move(atom)} {}  // NOLINT: implicit by design of the grammar
    explicit SymbolicFunction(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

    static SymbolicFunction constant(double c) { return SymbolicFunction(Atom{Scalar{c}}); }
    static SymbolicFunction product(const std::vector<SymbolicFunction>& factors);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    double evaluate(const HalfPlanePoint& z) const noexcept;
    NormalForm normal_form() const;

    /// |f|^r atom by atom. Throws InputError for r < 0 when a factor has bounded support.
    SymbolicFunction power(double r) const;

    /// Canonical text, e.g. "modpow(-1.5)*box(0,1)". parse(serialize()) == *this.
    std::string serialize() const;
    static SymbolicFunction parse(std::string_view text);

    friend SymbolicFunction operator*(const SymbolicFunction& a, const SymbolicFunction& b);
    friend bool operator==(const SymbolicFunction&, const SymbolicFunction&) = default;

private:
    std::vector<Atom> atoms_;
};

double evaluate(const Atom& atom, double x, double y) noexcept;

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace bergman
