#pragma once

#include <utility>
#include <vector>

namespace bergman {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |y / fitted - 1| over the points
};

/// Least-squares line through (log x, log y). Needs at least 3 points with distinct x > 0 and y > 0.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

}  // namespace bergman
