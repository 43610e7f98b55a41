#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergman/dyadic.hpp"
#include "bergman/fit.hpp"
#include "bergman/operators.hpp"
#include "bergman/schur.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// n points with x uniform in [x0, x1] and y log-uniform in [y0, y1].
std::vector<HalfPlanePoint> log_uniform_samples(std::size_t n, double x0, double x1, double y0, double y1,
                                                std::uint64_t seed);

// ------------------------------------------------------------------ sharpness

/// Weight |z|^{(2+alpha-delta)/p'} and test function |z|^{delta-2-alpha} 1_{|z|<=1}.
struct SharpnessConfig {
    ExponentConfig cfg{2.0, 2.0, 0.0, 0.0, true};
    std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
    QuadratureConfig qc = default_qc();
    SearchFamily search{};

    static QuadratureConfig default_qc() {
        QuadratureConfig qc;
        qc.tolerance = 1e-6;
        return qc;
    }
    void validate() const;
};

SymbolicFunction sharpness_weight(const ExponentConfig& cfg, double delta);
SymbolicFunction sharpness_function(const ExponentConfig& cfg, double delta);

struct SharpnessRow {
    double delta = 0.0;
    double weight_constant = 0.0;
    double source_norm = 0.0;
    double target_norm = 0.0;
    double ratio = 0.0;
    bool converged = true;
    std::string error;  // non-empty when the row failed
};

struct SharpnessResult {
    ExponentConfig cfg;
    std::vector<SharpnessRow> rows;
    // slopes in 1/delta
    std::optional<FitResult> weight_fit;
    std::optional<FitResult> source_fit;
    std::optional<FitResult> ratio_fit;
    double expected_weight_slope = 0.0;  // q/p'
    double expected_source_slope = 0.0;  // 1/p
    double expected_ratio_slope = 0.0;   // 1/p' + 1/q
};

SharpnessResult sharpness_run(const SharpnessConfig& sc);

// ------------------------------------------------------ off-diagonal sweep

struct OffDiagonalCase {
    OffDiagonalConfig cfg;
    /// Source y^{-s} 1_{[0,1) x [1/L, 1)}; defaults to s = 0 when admissible and
    /// s = (alpha - a)(p' - 1) otherwise.
    std::optional<double> source_power;
};

struct OffDiagonalRow {
    OffDiagonalConfig cfg;
    bool admissible = false;
    double source_power = 0.0;
    std::vector<double> truncations;
    std::vector<double> ratios;
    double spread = 0.0;  // max / min - 1
    double growth = 0.0;  // last / first
    bool stable = false;   // spread < 0.1
    bool growing = false;  // growth >= 2
    bool converged = true;
    std::string error;
};

/// Norm ratio ||T+ f_L||_{q,beta} / ||f_L||_{p,alpha} over all of H, where f_L is the
/// source cut off below height 1/L, for each L in `truncations`.
std::vector<OffDiagonalRow> offdiag_sweep(const std::vector<OffDiagonalCase>& cases,
                                          const std::vector<double>& truncations, const QuadratureConfig& qc);

/// 2^8, 2^16, 2^32.
std::vector<double> default_truncations();

// ---------------------------------------------------------- domination

struct DominationConfig {
    ExponentConfig cfg{2.0, 2.0, 0.0, 0.0, false};
    TruncatedGrid grid{};  // its tag is ignored; both grids are used
    std::size_t samples = 200;
    double x_min = -2.0;
    double x_max = 2.0;
    double y_min = 1.0 / 256.0;
    double y_max = 8.0;
    std::uint64_t seed = 1;
    QuadratureConfig qc{};
};

struct DominationResult {
    std::vector<HalfPlanePoint> samples;
    std::vector<double> ratios;  // S f / (Q^0 f + Q^{1/3} f)
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    double spread = 0.0;  // max / min
};

/// Throws DomainError if a sample lies in no box of either grid.
DominationResult domination_run(const SymbolicFunction& f, const DominationConfig& dc);

// ---------------------------------------------------------- S <= T

struct ComparisonReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_ratio = 0.0;  // max S f / T f
};

/// Checks S_{alpha,a} f <= T_{alpha,a} f (1 + slack) at each sample.
ComparisonReport s_below_t_check(const SymbolicFunction& f, const ExponentConfig& cfg,
                                 const std::vector<HalfPlanePoint>& samples, const QuadratureConfig& qc = {},
                                 double slack = 1e-6);

}  // namespace bergman
