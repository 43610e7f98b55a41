#include "bergman/dyadic.hpp"

#include <cmath>
#include <random>

#include "bergman/error.hpp"
#include "bergman/measure.hpp"
#include "bergman/parallel.hpp"
#include "bergman/summation.hpp"

namespace bergman {

namespace {

double shift(int j, double beta) { return (j % 2 == 0) ? beta : -beta; }

bool meets(const Interval& I, double x0, double x1) { return I.left() < x1 && I.right() > x0; }

constexpr std::size_t max_members = 20'000'000;

}  // namespace

Interval interval_of(const DyadicIndex& idx) {
    const double L = std::ldexp(1.0, idx.j);
    return Interval(L * (static_cast<double>(idx.m) + shift(idx.j, idx.beta)), L);
}

void TruncatedGrid::validate() const {
    if (beta != 0.0 && beta != 1.0 / 3.0) throw InputError("grid tag must be 0 or 1/3, got " + format_double(beta));
    if (j_min > j_max) throw InputError("grid scale range is empty");
    if (j_min < -60 || j_max > 60) throw InputError("grid scales must lie in [-60, 60]");
}

bool TruncatedGrid::is_member(const DyadicIndex& idx) const {
    return idx.beta == beta && idx.j >= j_min && idx.j <= j_max &&
           meets(interval_of(idx), bound.left(), bound.right());
}

DyadicIndex TruncatedGrid::at(int j, double x) const {
    const double L = std::ldexp(1.0, j);
    DyadicIndex idx{j, static_cast<std::int64_t>(std::floor(x / L - shift(j, beta))), beta};
    // guard against rounding in the division
    while (interval_of(idx).left() > x) --idx.m;
    while (interval_of(idx).right() <= x) ++idx.m;
    return idx;
}

std::vector<DyadicIndex> grid_members(const TruncatedGrid& g, const Rect& region) {
    g.validate();
    std::vector<DyadicIndex> out;
    if (region.empty() || !(region.y1 > 0.0)) return out;
    const double x0 = std::max(region.x0, g.bound.left());
    const double x1 = std::min(region.x1, g.bound.right());
    if (!(x0 < x1)) return out;
    for (int j = g.j_min; j <= g.j_max; ++j) {
        const double L = std::ldexp(1.0, j);
        if (!(region.y0 < L)) continue;
        const DyadicIndex first = g.at(j, x0);
        const DyadicIndex last = g.at(j, std::nextafter(x1, -INFINITY));
        if (out.size() + static_cast<std::size_t>(last.m - first.m + 1) > max_members) {
            throw InputError("region contains more than " + std::to_string(max_members) + " grid boxes");
        }
        for (std::int64_t m = first.m; m <= last.m; ++m) out.push_back({j, m, g.beta});
    }
    return out;
}

std::vector<DyadicIndex> containing_boxes(const TruncatedGrid& g, const HalfPlanePoint& z) {
    g.validate();
    std::vector<DyadicIndex> out;
    for (int j = g.j_min; j <= g.j_max; ++j) {
        if (!(z.y() < std::ldexp(1.0, j))) continue;
        DyadicIndex idx = g.at(j, z.x());
        if (g.is_member(idx)) out.push_back(idx);
    }
    return out;
}

DyadicModel::DyadicModel(SymbolicFunction f, ExponentConfig cfg, TruncatedGrid grid, QuadratureConfig qc)
    : f_(f.normal_form()), cfg_(cfg), grid_(grid), qc_(qc) {
    cfg_.validate();
    grid_.validate();
}

double DyadicModel::coefficient(const DyadicIndex& idx) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(idx); it != cache_.end()) return it->second;
    }
    const Interval I = interval_of(idx);
    const double pair = integrate_function_checked(f_, cfg_.alpha, qc_, CarlesonBox(I).rect());
    const double c = std::pow(I.length(), cfg_.a - 2.0 - cfg_.alpha) * pair;
    std::lock_guard lock(mutex_);
    cache_.emplace(idx, c);
    return c;
}

DyadicSum DyadicModel::apply(const HalfPlanePoint& z) const {
    const auto boxes = containing_boxes(grid_, z);
    const auto terms = parallel_map(boxes.size(), [&](std::size_t i) { return coefficient(boxes[i]); });
    return {compensated_sum(terms), boxes.size()};
}

double DyadicModel::pairing(const SymbolicFunction& g) const {
    const NormalForm gn = g.normal_form();
    if (gn.is_zero()) return 0.0;
    if (!gn.support) throw InputError("pairing needs a test function with rectangular support");
    const Rect S = *gn.support;

    // Qf is constant on each tent; below the finest scale it is constant on the whole box.
    std::vector<DyadicIndex> cells;
    for (const auto& J : grid_members(grid_, S)) {
        const double L = std::ldexp(1.0, J.j);
        if (J.j == grid_.j_min || 0.5 * L < S.y1) cells.push_back(J);
    }
    const auto terms = parallel_map(cells.size(), [&](std::size_t i) {
        const DyadicIndex& J = cells[i];
        const Interval I = interval_of(J);
        const Rect cell = J.j == grid_.j_min ? CarlesonBox(I).rect() : Tent(I).rect();
        const double gv = integrate_function_checked(gn, cfg_.alpha, qc_, cell);
        if (gv == 0.0) return 0.0;
        CompensatedSum level;
        for (int j = J.j; j <= grid_.j_max; ++j) {
            const DyadicIndex A = grid_.at(j, I.center());
            if (grid_.is_member(A)) level.add(coefficient(A));
        }
        return level.value() * gv;
    });
    return compensated_sum(terms);
}

DyadicSum dyadic_model_apply(const SymbolicFunction& f, const ExponentConfig& cfg, const TruncatedGrid& g,
                             const HalfPlanePoint& z, const QuadratureConfig& qc) {
    return DyadicModel(f, cfg, g, qc).apply(z);
}

double fractional_maximal(const SymbolicFunction& f, const SymbolicFunction& w, const ExponentConfig& cfg,
                          const TruncatedGrid& g, const HalfPlanePoint& z, const QuadratureConfig& qc) {
    cfg.validate();
    const NormalForm wn = w.normal_form();
    const NormalForm fw = f.normal_form() * wn;
    const auto boxes = containing_boxes(g, z);
    const auto values = parallel_map(boxes.size(), [&](std::size_t i) {
        const Interval I = interval_of(boxes[i]);
        const Rect r = CarlesonBox(I).rect();
        double den;
        try {
            den = integrate_function_checked(wn, cfg.alpha, qc, r);
        } catch (const DivergenceError& e) {
            throw DegenerateAverageError("weighted measure of the box of " + to_string(I) + " is infinite: " +
                                         e.what());
        }
        if (!(den > 0.0) || !std::isfinite(den)) {
            throw DegenerateAverageError("weighted measure of the box of " + to_string(I) + " is " +
                                         format_double(den));
        }
        return integrate_function_checked(fw, cfg.alpha, qc, r) / std::pow(den, 1.0 - cfg.gap());
    });
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

TilingReport tent_tiling_check(const TruncatedGrid& g, const Rect& region, std::size_t samples,
                               std::uint64_t seed) {
    g.validate();
    if (region.empty()) throw InputError("tiling region is empty");
    if (region.y0 < std::ldexp(1.0, g.j_min - 1) || region.y1 > std::ldexp(1.0, g.j_max) ||
        region.x0 < g.bound.left() || region.x1 > g.bound.right()) {
        throw InputError("tiling region is not covered by the grid's tents");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(region.x0, region.x1), uy(region.y0, region.y1);
    TilingReport rep;
    rep.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        if (!(y > 0.0)) continue;
        const HalfPlanePoint z(x, y);
        int count = 0;
        for (int j = g.j_min; j <= g.j_max; ++j) {
            const DyadicIndex idx = g.at(j, x);
            if (g.is_member(idx) && Tent(interval_of(idx)).contains(z)) ++count;
        }
        if (count != 1) {
            ++rep.violations;
            if (rep.examples.size() < 8) rep.examples.push_back(z);
        }
    }
    return rep;
}

}  // namespace bergman
