#include "bergman/quadrature.hpp"

#include <sstream>

#include "bergman/error.hpp"
#include "bergman/symbolic.hpp"

namespace bergman {

void QuadratureConfig::validate() const {
    auto bad = [](const std::string& what) { throw InputError("quadrature config: " + what); };
    if (!(x_min < x_max)) bad("x_min must be below x_max");
    if (!(y_max > 0.0)) bad("y_max must be positive");
    if (x_cells < 1) bad("x_cells must be at least 1");
    if (y_layers < 1) bad("y_layers must be at least 1");
    if (!(tolerance > 0.0)) bad("tolerance must be positive");
    if (max_depth < 0) bad("max_depth must be nonnegative");
    if (max_cells < 1) bad("max_cells must be positive");
    if (max_intervals < 1) bad("max_intervals must be positive");
}

namespace {

constexpr std::array<double, 5> gl5_x = {-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
                                         0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> gl5_w = {0.2369268850561890875142640, 0.4786286704993664680412915,
                                         0.5688888888888888888888889, 0.4786286704993664680412915,
                                         0.2369268850561890875142640};

double gl5(const PointFunction& f, const Rect& c) {
    const double cx = 0.5 * (c.x0 + c.x1), hx = 0.5 * (c.x1 - c.x0);
    const double cy = 0.5 * (c.y0 + c.y1), hy = 0.5 * (c.y1 - c.y0);
    CompensatedSum s;
    for (int i = 0; i < 5; ++i) {
        const double x = cx + hx * gl5_x[i];
        for (int j = 0; j < 5; ++j) {
            const double y = cy + hy * gl5_x[j];
            const double v = f(x, y);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os.precision(17);
                os << "integrand is not finite at (" << x << ", " << y << ")";
                throw DomainError(os.str());
            }
            s.add(gl5_w[i] * gl5_w[j] * v);
        }
    }
    return s.value() * hx * hy;
}

struct Cell {
    Rect rect;
    int depth;
    std::size_t id;
    double value;  // sum over the four children
    double error;  // |children - parent|
};

std::array<Rect, 4> quarters(const Rect& r) {
    const double mx = 0.5 * (r.x0 + r.x1);
    const double my = 0.5 * (r.y0 + r.y1);
    return {Rect{r.x0, mx, r.y0, my}, Rect{mx, r.x1, r.y0, my}, Rect{r.x0, mx, my, r.y1},
            Rect{mx, r.x1, my, r.y1}};
}

Cell make_cell(const PointFunction& f, const Rect& r, int depth, std::size_t id) {
    const double parent = gl5(f, r);
    CompensatedSum children;
    for (const auto& q : quarters(r)) children.add(gl5(f, q));
    return {r, depth, id, children.value(), std::fabs(children.value() - parent)};
}

std::vector<double> y_levels(const Rect& r, const QuadratureConfig& qc) {
    std::vector<double> levels;
    if (!qc.geometric_layers) {
        for (int k = 0; k <= qc.y_layers; ++k) levels.push_back(r.y0 + (r.y1 - r.y0) * k / qc.y_layers);
    } else if (r.y0 <= 0.0) {
        levels.push_back(0.0);
        for (int k = qc.y_layers; k >= 0; --k) levels.push_back(std::ldexp(r.y1, -k));
    } else {
        const int n = qc.y_layers;
        const double l0 = std::log(r.y0), l1 = std::log(r.y1);
        levels.push_back(r.y0);
        for (int k = 1; k < n; ++k) levels.push_back(std::exp(l0 + (l1 - l0) * k / n));
        levels.push_back(r.y1);
    }
    return levels;
}

}  // namespace

IntegralResult integrate(const PointFunction& f, const Rect& region, const QuadratureConfig& qc) {
    qc.validate();
    const Rect r = intersect(region, qc.truncation());
    if (r.empty()) return {};

    std::vector<double> ys = y_levels(r, qc);
    auto worse = [](const Cell& a, const Cell& b) {
        if (a.error != b.error) return a.error < b.error;
        return a.id > b.id;
    };
    std::priority_queue<Cell, std::vector<Cell>, decltype(worse)> heap(worse);
    std::vector<Cell> done;
    std::size_t next_id = 0;
    double total = 0.0;
    double total_err = 0.0;
    const double dx = (r.x1 - r.x0) / qc.x_cells;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        for (int i = 0; i < qc.x_cells; ++i) {
            const double x0 = r.x0 + dx * i;
            const double x1 = (i + 1 == qc.x_cells) ? r.x1 : r.x0 + dx * (i + 1);
            Cell c = make_cell(f, {x0, x1, ys[j], ys[j + 1]}, 0, next_id++);
            total += c.value;
            total_err += c.error;
            heap.push(c);
        }
    }

    std::size_t cells = heap.size();
    bool converged = true;
    while (!heap.empty() && total_err > qc.tolerance * std::fabs(total)) {
        if (cells >= qc.max_cells) {
            converged = false;
            break;
        }
        Cell c = heap.top();
        heap.pop();
        if (c.depth >= qc.max_depth) {
            done.push_back(c);
            continue;
        }
        total -= c.value;
        total_err -= c.error;
        for (const auto& q : quarters(c.rect)) {
            Cell child = make_cell(f, q, c.depth + 1, next_id++);
            total += child.value;
            total_err += child.error;
            heap.push(child);
        }
        cells += 3;
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
    CompensatedSum v, e;
    for (const auto& c : done) {
        v.add(c.value);
        e.add(c.error);
    }
    IntegralResult out;
    out.value = v.value();
    out.error_estimate = e.value();
    out.converged = converged && out.error_estimate <= qc.tolerance * std::fabs(out.value);
    return out;
}

IntegralResult integrate(const PointFunction& f, const CarlesonBox& box, const QuadratureConfig& qc) {
    return integrate(f, box.rect(), qc);
}

IntegralResult integrate(const PointFunction& f, const Tent& tent, const QuadratureConfig& qc) {
    return integrate(f, tent.rect(), qc);
}

double sine_power_integral(double t) {
    if (!(t > -1.0)) throw DivergenceError("sin^t is not integrable on (0, pi) for t = " + format_double(t));
    return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(0.5 * (t + 1.0)) - std::lgamma(0.5 * t + 1.0));
}

double tail_bound_radial(double decay, double nu, double radius) {
    if (!(radius > 0.0)) throw InputError("tail radius must be positive, got " + format_double(radius));
    if (!(nu > -1.0)) throw DivergenceError("measure y^nu is not locally integrable for nu = " + format_double(nu));
    const double k = nu + 2.0 - decay;
    if (!(k < 0.0)) {
        throw DivergenceError("decay |z|^-" + format_double(decay) + " is not integrable at infinity against y^" +
                              format_double(nu));
    }
    return sine_power_integral(nu) * std::pow(radius, k) / (-k);
}

double tail_bound_height(double nu, double height, double width) {
    if (!(nu > -1.0)) throw DivergenceError("y^" + format_double(nu) + " is not integrable at y = 0");
    if (!(height >= 0.0) || !(width >= 0.0)) throw InputError("tail strip must have nonnegative size");
    return width * std::pow(height, nu + 1.0) / (nu + 1.0);
}

}  // namespace bergman
