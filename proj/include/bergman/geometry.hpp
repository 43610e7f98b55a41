#pragma once

#include <cmath>
#include <optional>
#include <string>

namespace bergman {

/// A point z = x + iy of the upper half-plane; y > 0 is enforced on construction.
class HalfPlanePoint {
public:
    HalfPlanePoint(double x, double y);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double modulus() const noexcept { return std::hypot(x_, y_); }

    /// |z - conj(w)| = |(x - u) + i(y + v)|, bounded below by y + v.
    double distance_to_conjugate(const HalfPlanePoint& w) const noexcept {
        return std::hypot(x_ - w.x_, y_ + w.y_);
    }

    friend bool operator==(const HalfPlanePoint&, const HalfPlanePoint&) = default;

private:
    double x_;
    double y_;
};

/// Half-open interval [left, left + length) of the real line.
class Interval {
public:
    Interval(double left, double length);

    double left() const noexcept { return left_; }
    double length() const noexcept { return length_; }
    double right() const noexcept { return left_ + length_; }
    double center() const noexcept { return left_ + 0.5 * length_; }
    bool contains(double x) const noexcept { return left_ <= x && x < right(); }

    /// Distance from the origin to the closure of the interval.
    double distance_to_origin() const noexcept;

    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval& a, const Interval& b) noexcept {
        if (auto c = a.left_ <=> b.left_; c != 0) return c;
        return a.length_ <=> b.length_;
    }

private:
    double left_;
    double length_;
};

std::string to_string(const Interval& interval);

/// Axis-aligned rectangle [x0, x1) x [y0, y1) inside the closed half-plane (y0 >= 0).
struct Rect {
    double x0 = 0.0;
    double x1 = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;

    bool empty() const noexcept { return !(x0 < x1 && y0 < y1); }
    bool contains(double x, double y) const noexcept { return x0 <= x && x < x1 && y0 <= y && y < y1; }
    bool touches_axis() const noexcept { return y0 <= 0.0; }
    /// The origin lies in the closure.
    bool touches_origin() const noexcept { return y0 <= 0.0 && x0 <= 0.0 && 0.0 <= x1; }
    double area() const noexcept { return empty() ? 0.0 : (x1 - x0) * (y1 - y0); }

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Intersection; an empty result is returned as an empty Rect.
Rect intersect(const Rect& a, const Rect& b) noexcept;

/// Carleson box Q_I = {x in I, 0 < y < |I|}.
class CarlesonBox {
public:
    explicit CarlesonBox(Interval base) : base_(base) {}

    const Interval& base() const noexcept { return base_; }
    bool contains(const HalfPlanePoint& z) const noexcept {
        return base_.contains(z.x()) && z.y() < base_.length();
    }
    Rect rect() const noexcept { return {base_.left(), base_.right(), 0.0, base_.length()}; }

private:
    Interval base_;
};

/// Upper half T_I of the Carleson box. Membership uses |I|/2 <= y < |I|, so the
/// top edge of a child tent belongs to its parent and the tents of one dyadic
/// grid partition the half-plane exactly.
class Tent {
public:
    explicit Tent(Interval base) : base_(base) {}

    const Interval& base() const noexcept { return base_; }
    bool contains(const HalfPlanePoint& z) const noexcept {
        return base_.contains(z.x()) && 0.5 * base_.length() <= z.y() && z.y() < base_.length();
    }
    Rect rect() const noexcept {
        return {base_.left(), base_.right(), 0.5 * base_.length(), base_.length()};
    }

private:
    Interval base_;
};

}  // namespace bergman
