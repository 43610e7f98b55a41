#include "bergman/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Rect box_rect(const Interval& I) { return {I.left(), I.right(), 0.0, I.length()}; }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

// ---------------------------------------------------------------- NormalForm

bool NormalForm::is_zero() const noexcept {
    if (coefficient == 0.0) return true;
    if (support && support->empty()) return true;
    if (radius && !(*radius > 0.0)) return true;
    return false;
}

double NormalForm::degree_at_infinity() const noexcept {
    double d = modulus_exponent + height_exponent;
    for (const auto& k : shifts) d -= k.exponent;
    return d;
}

bool NormalForm::support_touches_origin() const noexcept {
    if (is_zero()) return false;
    return !support || support->touches_origin();
}

double NormalForm::log_abs(double x, double y) const noexcept {
    if (coefficient == 0.0) return kNegInf;
    if (support && !support->contains(x, y)) return kNegInf;
    const double r2 = x * x + y * y;
    if (radius && r2 > (*radius) * (*radius)) return kNegInf;
    double v = std::log(std::fabs(coefficient));
    if (modulus_exponent != 0.0) v += 0.5 * modulus_exponent * std::log(r2);
    if (height_exponent != 0.0) v += height_exponent * std::log(y);
    for (const auto& k : shifts) {
        const double h = y + k.shift;
        v -= 0.5 * k.exponent * std::log(x * x + h * h);
    }
    return v;
}

double NormalForm::evaluate(double x, double y) const noexcept {
    const double l = log_abs(x, y);
    if (l == kNegInf) return 0.0;
    return std::copysign(std::exp(l), coefficient);
}

NormalForm NormalForm::abs_pow(double p) const {
    if (p == 0.0) return NormalForm{};
    if (p < 0.0 && bounded_support()) {
        throw InputError("negative power " + format_double(p) + " of a function with bounded support");
    }
    NormalForm r = *this;
    r.coefficient = std::pow(std::fabs(coefficient), p);
    r.modulus_exponent *= p;
    r.height_exponent *= p;
    for (auto& k : r.shifts) k.exponent *= p;
    return r;
}

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
    NormalForm r;
    r.coefficient = a.coefficient * b.coefficient;
    r.modulus_exponent = a.modulus_exponent + b.modulus_exponent;
    r.height_exponent = a.height_exponent + b.height_exponent;
    if (a.radius && b.radius) {
        r.radius = std::min(*a.radius, *b.radius);
    } else {
        r.radius = a.radius ? a.radius : b.radius;
    }
    if (a.support && b.support) {
        r.support = intersect(*a.support, *b.support);
    } else {
        r.support = a.support ? a.support : b.support;
    }
    r.shifts = a.shifts;
    for (const auto& k : b.shifts) {
        auto it = std::find_if(r.shifts.begin(), r.shifts.end(),
                               [&](const KernelShift& e) { return e.shift == k.shift; });
        if (it == r.shifts.end()) {
            r.shifts.push_back(k);
        } else {
            it->exponent += k.exponent;
        }
    }
    std::erase_if(r.shifts, [](const KernelShift& e) { return e.exponent == 0.0; });
    std::sort(r.shifts.begin(), r.shifts.end(),
              [](const KernelShift& x, const KernelShift& y) { return x.shift < y.shift; });
    return r;
}

// ----------------------------------------------------------------- atoms

double evaluate(const Atom& atom, double x, double y) noexcept {
    return std::visit(
        Overloaded{
            [](const Scalar& s) { return s.value; },
            [&](const PowerOfModulus& s) { return std::pow(std::hypot(x, y), s.exponent); },
            [&](const PowerOfHeight& s) { return std::pow(y, s.exponent); },
            [&](const TruncatedPower& s) {
                const double r = std::hypot(x, y);
                return r <= s.radius ? std::pow(r, s.exponent) : 0.0;
            },
            [&](const ShiftedKernelPower& s) { return std::pow(std::hypot(x, y + s.shift), -s.exponent); },
            [&](const BoxIndicator& s) {
                return (s.base.contains(x) && y < s.base.length()) ? 1.0 : 0.0;
            },
        },
        atom);
}

namespace {

NormalForm to_normal_form(const Atom& atom) {
    NormalForm n;
    std::visit(Overloaded{
                   [&](const Scalar& s) { n.coefficient = s.value; },
                   [&](const PowerOfModulus& s) { n.modulus_exponent = s.exponent; },
                   [&](const PowerOfHeight& s) { n.height_exponent = s.exponent; },
                   [&](const TruncatedPower& s) {
                       n.modulus_exponent = s.exponent;
                       n.radius = s.radius;
                   },
                   [&](const ShiftedKernelPower& s) {
                       if (s.exponent != 0.0) n.shifts.push_back({s.shift, s.exponent});
                   },
                   [&](const BoxIndicator& s) { n.support = box_rect(s.base); },
               },
               atom);
    return n;
}

void validate(const Atom& atom) {
    std::visit(Overloaded{
                   [](const Scalar& s) {
                       if (!std::isfinite(s.value)) throw InputError("const: value must be finite");
                   },
                   [](const PowerOfModulus& s) {
                       if (!std::isfinite(s.exponent)) throw InputError("modpow: exponent must be finite");
                   },
                   [](const PowerOfHeight& s) {
                       if (!std::isfinite(s.exponent)) throw InputError("ypow: exponent must be finite");
                   },
                   [](const TruncatedPower& s) {
                       if (!std::isfinite(s.exponent)) throw InputError("trunc: exponent must be finite");
                       if (!(s.radius > 0.0) || !std::isfinite(s.radius)) {
                           throw InputError("trunc: radius must be positive, got " + format_double(s.radius));
                       }
                   },
                   [](const ShiftedKernelPower& s) {
                       if (!(s.shift > 0.0) || !std::isfinite(s.shift)) {
                           throw InputError("kern: shift t must be positive, got " + format_double(s.shift));
                       }
                       if (!std::isfinite(s.exponent)) throw InputError("kern: exponent must be finite");
                   },
                   [](const BoxIndicator&) {},
               },
               atom);
}

std::string serialize_atom(const Atom& atom) {
    return std::visit(
        Overloaded{
            [](const Scalar& s) { return "const(" + format_double(s.value) + ")"; },
            [](const PowerOfModulus& s) { return "modpow(" + format_double(s.exponent) + ")"; },
            [](const PowerOfHeight& s) { return "ypow(" + format_double(s.exponent) + ")"; },
            [](const TruncatedPower& s) {
                return "trunc(" + format_double(s.exponent) + "," + format_double(s.radius) + ")";
            },
            [](const ShiftedKernelPower& s) {
                return "kern(" + format_double(s.shift) + "," + format_double(s.exponent) + ")";
            },
            [](const BoxIndicator& s) {
                return "box(" + format_double(s.base.left()) + "," + format_double(s.base.length()) + ")";
            },
        },
        atom);
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    SymbolicFunction parse() {
        std::vector<Atom> atoms;
        skip_space();
        if (pos_ == text_.size()) fail("empty function");
        atoms.push_back(factor());
        skip_space();
        while (pos_ < text_.size()) {
            expect('*');
            atoms.push_back(factor());
            skip_space();
        }
        return SymbolicFunction(std::move(atoms));
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "cannot parse function \"" << text_ << "\" at offset " << pos_ << ": " << what;
        throw InputError(os.str());
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    double number() {
        skip_space();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        if (begin != end && *begin == '+') ++begin;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr == begin) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    std::vector<double> args(std::size_t n) {
        expect('(');
        std::vector<double> out;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) expect(',');
            out.push_back(number());
        }
        expect(')');
        return out;
    }

    Atom factor() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        if (name.empty()) return Scalar{number()};
        Atom atom;
        if (name == "const") {
            atom = Scalar{args(1)[0]};
        } else if (name == "modpow") {
            atom = PowerOfModulus{args(1)[0]};
        } else if (name == "ypow") {
            atom = PowerOfHeight{args(1)[0]};
        } else if (name == "trunc") {
            auto a = args(2);
            atom = TruncatedPower{a[0], a[1]};
        } else if (name == "kern") {
            auto a = args(2);
            atom = ShiftedKernelPower{a[0], a[1]};
        } else if (name == "box") {
            auto a = args(2);
            if (!(a[1] > 0.0)) fail("box length must be positive");
            atom = BoxIndicator{Interval(a[0], a[1])};
        } else {
            pos_ = start;
            fail("unknown factor '" + std::string(name) + "'");
        }
        validate(atom);
        return atom;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------- SymbolicFunction

SymbolicFunction SymbolicFunction::product(const std::vector<SymbolicFunction>& factors) {
    std::vector<Atom> atoms;
    for (const auto& f : factors) atoms.insert(atoms.end(), f.atoms_.begin(), f.atoms_.end());
    return SymbolicFunction(std::move(atoms));
}

SymbolicFunction operator*(const SymbolicFunction& a, const SymbolicFunction& b) {
    return SymbolicFunction::product({a, b});
}

double SymbolicFunction::evaluate(const HalfPlanePoint& z) const noexcept {
    double v = 1.0;
    for (const auto& atom : atoms_) v *= bergman::evaluate(atom, z.x(), z.y());
    return v;
}

NormalForm SymbolicFunction::normal_form() const {
    NormalForm n;
    for (const auto& atom : atoms_) {
        validate(atom);
        n = n * to_normal_form(atom);
    }
    return n;
}

SymbolicFunction SymbolicFunction::power(double r) const {
    std::vector<Atom> out;
    for (const auto& atom : atoms_) {
        out.push_back(std::visit(
            Overloaded{
                [&](const Scalar& s) -> Atom { return Scalar{std::pow(std::fabs(s.value), r)}; },
                [&](const PowerOfModulus& s) -> Atom { return PowerOfModulus{s.exponent * r}; },
                [&](const PowerOfHeight& s) -> Atom { return PowerOfHeight{s.exponent * r}; },
                [&](const TruncatedPower& s) -> Atom {
                    if (r < 0.0) throw InputError("negative power " + format_double(r) + " of trunc(...)");
                    return TruncatedPower{s.exponent * r, s.radius};
                },
                [&](const ShiftedKernelPower& s) -> Atom { return ShiftedKernelPower{s.shift, s.exponent * r}; },
                [&](const BoxIndicator& s) -> Atom {
                    if (r < 0.0) throw InputError("negative power " + format_double(r) + " of box(...)");
                    return s;
                },
            },
            atom));
    }
    return SymbolicFunction(std::move(out));
}

std::string SymbolicFunction::serialize() const {
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0) out += '*';
        out += serialize_atom(atoms_[i]);
    }
    return out;
}

SymbolicFunction SymbolicFunction::parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace bergman
