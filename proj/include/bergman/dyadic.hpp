#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbolic.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Interval 2^j([0,1) + m + (-1)^j beta) of the grid with tag beta in {0, 1/3}.
struct DyadicIndex {
    int j = 0;
    std::int64_t m = 0;
    double beta = 0.0;

    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
    friend std::weak_ordering operator<=>(const DyadicIndex& a, const DyadicIndex& b) noexcept {
        if (auto c = a.j <=> b.j; c != 0) return c;
        if (auto c = a.m <=> b.m; c != 0) return c;
        return std::weak_order(a.beta, b.beta);
    }
};

Interval interval_of(const DyadicIndex& idx);

/// Scales j_min..j_max of one grid, restricted to intervals meeting `bound`.
struct TruncatedGrid {
    double beta = 0.0;
    int j_min = -14;
    int j_max = 7;
    Interval bound{-64.0, 128.0};

    void validate() const;
    bool is_member(const DyadicIndex& idx) const;
    /// The index at scale j whose interval contains x (member or not).
    DyadicIndex at(int j, double x) const;
};

/// Members whose boxes meet the region, sorted by (j, m).
std::vector<DyadicIndex> grid_members(const TruncatedGrid& g, const Rect& region);

/// Members whose boxes contain z, by increasing scale.
std::vector<DyadicIndex> containing_boxes(const TruncatedGrid& g, const HalfPlanePoint& z);

struct DyadicSum {
    double value = 0.0;
    std::size_t boxes = 0;  // grid boxes containing the point; 0 flags a point outside the grid
};

/// Finite-grid model operator sum_I |I|^{a-2-alpha} <f, 1_{Q_I}>_alpha 1_{Q_I} for f >= 0.
/// Box pairings are cached; the object is safe to share between threads.
class DyadicModel {
public:
    DyadicModel(SymbolicFunction f, ExponentConfig cfg, TruncatedGrid grid, QuadratureConfig qc = {});

    /// |I|^{a-2-alpha} <f, 1_{Q_I}>_alpha.
    double coefficient(const DyadicIndex& idx) const;
    DyadicSum apply(const HalfPlanePoint& z) const;

    /// <Qf, g>_alpha, integrating the piecewise constant Qf against g tent by tent.
    /// g must have rectangular support.
    double pairing(const SymbolicFunction& g) const;

    const TruncatedGrid& grid() const noexcept { return grid_; }

private:
    NormalForm f_;
    ExponentConfig cfg_;
    TruncatedGrid grid_;
    QuadratureConfig qc_;
    mutable std::mutex mutex_;
    mutable std::map<DyadicIndex, double> cache_;
};

DyadicSum dyadic_model_apply(const SymbolicFunction& f, const ExponentConfig& cfg, const TruncatedGrid& g,
                             const HalfPlanePoint& z, const QuadratureConfig& qc = {});

/// max over grid boxes Q_I containing z of int_{Q_I} |f| w dV_alpha / |Q_I|_{w,alpha}^{1-a/(2+alpha)}.
double fractional_maximal(const SymbolicFunction& f, const SymbolicFunction& w, const ExponentConfig& cfg,
                          const TruncatedGrid& g, const HalfPlanePoint& z, const QuadratureConfig& qc = {});

struct TilingReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::vector<HalfPlanePoint> examples;  // first few offending points
};

/// Samples points uniformly in the region and counts those not in exactly one tent.
TilingReport tent_tiling_check(const TruncatedGrid& g, const Rect& region, std::size_t samples,
                               std::uint64_t seed = 1);

}  // namespace bergman
