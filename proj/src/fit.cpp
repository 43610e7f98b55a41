#include "bergman/fit.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/error.hpp"
#include "bergman/summation.hpp"
#include "bergman/symbolic.hpp"

namespace bergman {

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw InputError("log-log fit needs at least 3 points, got " + std::to_string(points.size()));
    std::vector<double> xs;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
            throw InputError("log-log fit needs positive finite data, got (" + format_double(x) + ", " +
                             format_double(y) + ")");
        }
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) throw InputError("log-log fit has duplicate x values");

    const double n = static_cast<double>(points.size());
    CompensatedSum sx, sy;
    for (const auto& [x, y] : points) {
        sx.add(std::log(x));
        sy.add(std::log(y));
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    CompensatedSum sxx, sxy;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx.add(dx * dx);
        sxy.add(dx * (std::log(y) - my));
    }
    FitResult r;
    r.slope = sxy.value() / sxx.value();
    r.intercept = my - r.slope * mx;
    for (const auto& [x, y] : points) {
        const double fitted = std::exp(r.intercept + r.slope * std::log(x));
        r.max_residual = std::max(r.max_residual, std::fabs(y / fitted - 1.0));
    }
    return r;
}

}  // namespace bergman
