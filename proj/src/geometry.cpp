#include "bergman/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {

HalfPlanePoint::HalfPlanePoint(double x, double y) : x_(x), y_(y) {
    if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0)) {
        std::ostringstream os;
        os << "point (" << x << ", " << y << ") is not in the upper half-plane";
        throw InputError(os.str());
    }
}

Interval::Interval(double left, double length) : left_(left), length_(length) {
    if (!std::isfinite(left) || !std::isfinite(length) || !(length > 0.0)) {
        std::ostringstream os;
        os << "interval length must be positive (left=" << left << ", length=" << length << ")";
        throw InputError(os.str());
    }
}

double Interval::distance_to_origin() const noexcept {
    if (left_ <= 0.0 && 0.0 <= right()) return 0.0;
    return std::min(std::fabs(left_), std::fabs(right()));
}

std::string to_string(const Interval& interval) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << interval.left() << ", " << interval.right() << ")";
    return os.str();
}

Rect intersect(const Rect& a, const Rect& b) noexcept {
    Rect r{std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0), std::min(a.y1, b.y1)};
    if (r.empty()) return Rect{};
    return r;
}

}  // namespace bergman
