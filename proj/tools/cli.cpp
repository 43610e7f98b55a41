#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "bergman/csv.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"
#include "bergman/experiments.hpp"
#include "bergman/operators.hpp"
#include "bergman/schur.hpp"
#include "bergman/weights.hpp"

namespace bergman::cli {

namespace {

/// Raised by check-type commands; carries the summary line.
struct CheckFailed {
    std::string what;
};

std::vector<double> split_numbers(const std::string& text, const std::string& param) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw InputError(param + ": '" + item + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> split_exact(const std::string& text, std::size_t n, const std::string& param) {
    auto v = split_numbers(text, param);
    if (v.size() != n) {
        throw InputError(param + ": expected " + std::to_string(n) + " comma-separated numbers, got '" + text + "'");
    }
    return v;
}

std::vector<HalfPlanePoint> parse_points(const std::vector<std::string>& items) {
    std::vector<HalfPlanePoint> out;
    for (const auto& s : items) {
        const auto v = split_exact(s, 2, "--point");
        if (!(v[1] > 0.0)) throw InputError("--point: y must be positive in '" + s + "'");
        out.emplace_back(v[0], v[1]);
    }
    return out;
}

double parse_grid_tag(const std::string& s) {
    if (s == "0") return 0.0;
    if (s == "1/3") return 1.0 / 3.0;
    throw InputError("--beta: grid tag must be 0 or 1/3, got '" + s + "'");
}

SymbolicFunction parse_function(const std::string& text, const std::string& param) {
    try {
        return SymbolicFunction::parse(text);
    } catch (const InputError& e) {
        throw InputError(param + ": " + e.what());
    }
}

struct Exponents {
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    double a = 0.0;
    bool balanced = false;

    ExponentConfig config() const {
        ExponentConfig c{p, q, alpha, a, balanced};
        c.validate();
        return c;
    }
};

void add_exponents(CLI::App* sub, Exponents& e) {
    sub->add_option("--p", e.p, "source exponent p")->capture_default_str();
    sub->add_option("--q", e.q, "target exponent q")->capture_default_str();
    sub->add_option("--alpha", e.alpha, "measure order alpha")->capture_default_str();
    sub->add_option("--a", e.a, "fractional order a")->capture_default_str();
    sub->add_flag("--balanced", e.balanced, "require 1/p - 1/q = a/(2+alpha)");
}

struct Common {
    std::string output;
    double tolerance = 1e-8;
    int max_intervals = 2000;

    QuadratureConfig qc() const {
        QuadratureConfig c;
        c.tolerance = tolerance;
        c.max_intervals = max_intervals;
        c.validate();
        return c;
    }
};

void add_common(CLI::App* sub, Common& c, double default_tolerance) {
    c.output = sub->get_name() + ".csv";
    c.tolerance = default_tolerance;
    sub->add_option("-o,--output", c.output, "CSV path, '-' for standard output")->capture_default_str();
    sub->add_option("--tol", c.tolerance, "relative quadrature tolerance")->capture_default_str();
    sub->add_option("--max-intervals", c.max_intervals, "intervals per 1-D adaptive integral")
        ->capture_default_str();
}

struct Grid {
    std::string beta = "0";
    int j_min = -14;
    int j_max = 7;

    TruncatedGrid grid() const {
        TruncatedGrid g;
        g.beta = parse_grid_tag(beta);
        g.j_min = j_min;
        g.j_max = j_max;
        g.validate();
        return g;
    }
};

void add_grid(CLI::App* sub, Grid& g, bool with_tag) {
    if (with_tag) sub->add_option("--beta", g.beta, "grid tag, 0 or 1/3")->capture_default_str();
    sub->add_option("--jmin", g.j_min, "smallest scale 2^jmin")->capture_default_str();
    sub->add_option("--jmax", g.j_max, "largest scale 2^jmax")->capture_default_str();
}

struct Sampling {
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    double x_min = -2.0;
    double x_max = 2.0;
    double y_min = 1.0 / 256.0;
    double y_max = 8.0;

    std::vector<HalfPlanePoint> points() const {
        return log_uniform_samples(samples, x_min, x_max, y_min, y_max, seed);
    }
};

void add_sampling(CLI::App* sub, Sampling& s, std::size_t default_samples) {
    s.samples = default_samples;
    sub->add_option("--samples", s.samples, "number of sample points")->capture_default_str();
    sub->add_option("--seed", s.seed, "sampling seed")->capture_default_str();
    sub->add_option("--xmin", s.x_min, "sample x range")->capture_default_str();
    sub->add_option("--xmax", s.x_max, "sample x range")->capture_default_str();
    sub->add_option("--ymin", s.y_min, "sample heights, log-uniform")->capture_default_str();
    sub->add_option("--ymax", s.y_max, "sample heights, log-uniform")->capture_default_str();
}

OperatorSpec make_operator(const std::string& name, double alpha, double a, double b) {
    OperatorSpec op;
    if (name == "bergman") {
        op = OperatorSpec::positive_bergman(alpha);
    } else if (name == "s") {
        op = OperatorSpec::fractional_s(alpha, a);
    } else if (name == "t") {
        op = OperatorSpec::fractional_t(alpha, a);
    } else if (name == "tplus") {
        op = OperatorSpec::general_t_plus(a, b);
    } else {
        throw InputError("--op: expected bergman, s, t or tplus, got '" + name + "'");
    }
    op.validate();
    return op;
}

struct Command {
    CLI::App* app = nullptr;
    Common common;
    std::function<std::string(CsvTable&)> run;  // fills the table, returns the summary
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- commands

void def_apply(Command& c) {
    auto s = std::make_shared<std::tuple<std::string, std::string, double, double, double, std::vector<std::string>>>(
        "bergman", "box(0,1)", 0.0, 0.0, 1.0, std::vector<std::string>{"0.5,0.5"});
    auto& [op, f, alpha, a, b, points] = *s;
    c.app->add_option("--op", op, "bergman, s, t or tplus")->capture_default_str();
    c.app->add_option("--f", f, "source function")->capture_default_str();
    c.app->add_option("--alpha", alpha, "order alpha (bergman, s, t)")->capture_default_str();
    c.app->add_option("--a", a, "order a (s, t, tplus)")->capture_default_str();
    c.app->add_option("--b", b, "order b (tplus)")->capture_default_str();
    c.app->add_option("--point", points, "evaluation point x,y (repeatable)")->capture_default_str();
    c.run = [s, &c](CsvTable& t) {
        auto& [op, f, alpha, a, b, points] = *s;
        const OperatorSpec spec = make_operator(op, alpha, a, b);
        const SymbolicFunction fn = parse_function(f, "--f");
        const auto zs = parse_points(points);
        t = CsvTable("apply", {"op", "alpha", "a", "b", "f", "x", "y", "value", "error", "converged"});
        double hi = 0.0;
        for (const auto& z : zs) {
            const OperatorValue v = apply(spec, fn, z, c.common.qc());
            t.row().cell(op).cell(spec.alpha).cell(spec.a).cell(spec.b).cell(fn.serialize()).cell(z.x()).cell(z.y());
            t.cell(v.value()).cell(v.error * std::exp(v.log_scale)).cell(v.converged);
            hi = std::max(hi, v.value());
        }
        return "apply: " + spec.name() + " at " + std::to_string(zs.size()) + " points, max value " + fmt(hi);
    };
}

void def_norm_ratio(Command& c) {
    struct S {
        std::string op = "bergman", f = "box(0,1)", sw = "const(1)", tw = "const(1)";
        Exponents e;
        double b = 1.0;
        double src_order = 0.0, tgt_order = 0.0;
        std::string region;
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--op", s->op, "bergman, s, t or tplus")->capture_default_str();
    c.app->add_option("--f", s->f, "source function")->capture_default_str();
    add_exponents(c.app, s->e);
    c.app->add_option("--b", s->b, "order b (tplus)")->capture_default_str();
    c.app->add_option("--source-weight", s->sw, "multiplier of f in the source norm")->capture_default_str();
    c.app->add_option("--target-weight", s->tw, "multiplier of op f in the target norm")->capture_default_str();
    c.app->add_option("--source-order", s->src_order, "nu_1 in y^nu_1 dxdy")->capture_default_str();
    c.app->add_option("--target-order", s->tgt_order, "nu_2 in y^nu_2 dxdy")->capture_default_str();
    c.app->add_option("--region", s->region, "restrict to x0,x1,y0,y1");
    c.run = [s, &c](CsvTable& t) {
        const ExponentConfig cfg = s->e.config();
        const OperatorSpec op = make_operator(s->op, cfg.alpha, cfg.a, s->b);
        const SymbolicFunction f = parse_function(s->f, "--f");
        const NormSpaces spaces{parse_function(s->sw, "--source-weight"), parse_function(s->tw, "--target-weight"),
                                s->src_order, s->tgt_order};
        std::optional<Rect> region;
        if (!s->region.empty()) {
            const auto v = split_exact(s->region, 4, "--region");
            region = Rect{v[0], v[1], v[2], v[3]};
            if (region->empty() || region->y0 < 0.0) throw InputError("--region: empty or below the axis");
        }
        const NormRatio r = norm_ratio(op, f, cfg, spaces, c.common.qc(), region);
        t = CsvTable("norm-ratio", {"op", "f", "p", "q", "alpha", "a", "b", "source_order", "target_order", "source",
                                    "target", "ratio", "converged"});
        t.row().cell(s->op).cell(f.serialize()).cell(cfg.p).cell(cfg.q).cell(cfg.alpha).cell(cfg.a).cell(op.b);
        t.cell(s->src_order).cell(s->tgt_order).cell(r.source).cell(r.target).cell(r.ratio).cell(r.converged);
        return "norm-ratio: " + op.name() + " ratio " + fmt(r.ratio) + (r.converged ? "" : " (not converged)");
    };
}

void def_weight_constant(Command& c) {
    struct S {
        std::string w = "const(1)", kind = "bpq";
        Exponents e;
        SearchFamily search;
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--w", s->w, "weight omega")->capture_default_str();
    c.app->add_option("--class", s->kind, "bpq or bp")->capture_default_str();
    add_exponents(c.app, s->e);
    c.app->add_option("--depth", s->search.depth, "search family depth")->capture_default_str();
    c.run = [s, &c](CsvTable& t) {
        const ExponentConfig cfg = s->e.config();
        const SymbolicFunction w = parse_function(s->w, "--w");
        s->search.validate();
        WeightConstant k;
        if (s->kind == "bpq") {
            k = bpq_constant(WeightPair(w, cfg), cfg, s->search, c.common.qc());
        } else if (s->kind == "bp") {
            k = bp_constant(w, cfg.p, cfg.alpha, s->search, c.common.qc());
        } else {
            throw InputError("--class: expected bpq or bp, got '" + s->kind + "'");
        }
        t = CsvTable("weight-constant", {"class", "w", "p", "q", "alpha", "a", "value", "argmax_left",
                                         "argmax_length", "intervals"});
        t.row().cell(s->kind).cell(w.serialize()).cell(cfg.p).cell(cfg.q).cell(cfg.alpha).cell(cfg.a).cell(k.value);
        t.cell(k.argmax.left()).cell(k.argmax.length()).cell(k.intervals);
        return "weight-constant: [" + w.serialize() + "] = " + fmt(k.value) + " at " + to_string(k.argmax);
    };
}

void def_dyadic_apply(Command& c) {
    struct S {
        std::string f = "box(0,1)";
        Exponents e;
        Grid g;
        std::vector<std::string> points{"0.5,0.5"};
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--f", s->f, "source function, f >= 0")->capture_default_str();
    add_exponents(c.app, s->e);
    add_grid(c.app, s->g, true);
    c.app->add_option("--point", s->points, "evaluation point x,y (repeatable)")->capture_default_str();
    c.run = [s, &c](CsvTable& t) {
        const ExponentConfig cfg = s->e.config();
        const TruncatedGrid g = s->g.grid();
        const SymbolicFunction f = parse_function(s->f, "--f");
        const DyadicModel model(f, cfg, g, c.common.qc());
        t = CsvTable("dyadic-apply", {"f", "alpha", "a", "beta", "j_min", "j_max", "x", "y", "value", "boxes"});
        for (const auto& z : parse_points(s->points)) {
            const DyadicSum v = model.apply(z);
            t.row().cell(f.serialize()).cell(cfg.alpha).cell(cfg.a).cell(s->g.beta).cell(g.j_min).cell(g.j_max);
            t.cell(z.x()).cell(z.y()).cell(v.value).cell(v.boxes);
        }
        return "dyadic-apply: " + std::to_string(t.size()) + " points on grid " + s->g.beta;
    };
}

void def_domination(Command& c) {
    struct S {
        std::vector<std::string> fs{"box(0,1)", "trunc(-1.5,1)", "kern(1,3)"};
        Exponents e;
        Grid g;
        Sampling smp;
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--f", s->fs, "test function (repeatable)")->capture_default_str();
    add_exponents(c.app, s->e);
    add_grid(c.app, s->g, false);
    add_sampling(c.app, s->smp, 200);
    c.run = [s, &c](CsvTable& t) {
        DominationConfig dc;
        dc.cfg = s->e.config();
        dc.grid = s->g.grid();
        dc.samples = s->smp.samples;
        dc.seed = s->smp.seed;
        dc.x_min = s->smp.x_min;
        dc.x_max = s->smp.x_max;
        dc.y_min = s->smp.y_min;
        dc.y_max = s->smp.y_max;
        dc.qc = c.common.qc();
        t = CsvTable("domination", {"f", "p", "q", "alpha", "a", "j_min", "j_max", "samples", "min_ratio",
                                    "max_ratio", "spread"});
        double lo = INFINITY, hi = 0.0;
        for (const auto& text : s->fs) {
            const SymbolicFunction f = parse_function(text, "--f");
            const DominationResult r = domination_run(f, dc);
            t.row().cell(f.serialize()).cell(dc.cfg.p).cell(dc.cfg.q).cell(dc.cfg.alpha).cell(dc.cfg.a);
            t.cell(dc.grid.j_min).cell(dc.grid.j_max).cell(dc.samples).cell(r.min_ratio).cell(r.max_ratio).cell(r.spread);
            lo = std::min(lo, r.max_ratio);
            hi = std::max(hi, r.max_ratio);
        }
        return "domination: constants in [" + fmt(lo) + ", " + fmt(hi) + "] over " + std::to_string(s->fs.size()) +
               " functions";
    };
}

void def_maximal(Command& c) {
    struct S {
        std::string f = "trunc(-1.8,1)";
        Exponents e;
        Grid g;
        Sampling smp;
        double slack = 1e-6;
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--f", s->f, "test function")->capture_default_str();
    add_exponents(c.app, s->e);
    add_grid(c.app, s->g, true);
    add_sampling(c.app, s->smp, 100);
    c.app->add_option("--slack", s->slack, "relative slack of M <= S")->capture_default_str();
    c.run = [s, &c](CsvTable& t) {
        const ExponentConfig cfg = s->e.config();
        const SymbolicFunction f = parse_function(s->f, "--f");
        const MinorizationReport r =
            maximal_minorization_check(f, cfg, s->g.grid(), s->smp.points(), c.common.qc(), s->slack);
        t = CsvTable("maximal", {"f", "p", "q", "alpha", "a", "beta", "samples", "violations", "max_ratio"});
        t.row().cell(f.serialize()).cell(cfg.p).cell(cfg.q).cell(cfg.alpha).cell(cfg.a).cell(s->g.beta);
        t.cell(r.samples).cell(r.violations).cell(r.max_ratio);
        std::string line = "maximal: " + std::to_string(r.violations) + " violations of M <= S in " +
                           std::to_string(r.samples) + " samples, max M/S " + fmt(r.max_ratio);
        if (r.violations > 0) throw CheckFailed{line};
        return line;
    };
}

void def_schur(Command& c) {
    struct S {
        double p = 2.0, q = 2.0, alpha = 0.0, a = 0.0, beta = 0.0;
        std::size_t heights = 10;
        double y_min = 0.25, y_max = 4.0;
        double spread = 0.02;
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--p", s->p, "source exponent")->capture_default_str();
    c.app->add_option("--q", s->q, "target exponent")->capture_default_str();
    c.app->add_option("--alpha", s->alpha, "source order")->capture_default_str();
    c.app->add_option("--a", s->a, "order a of T+")->capture_default_str();
    auto* beta = c.app->add_option("--beta", s->beta, "target order (default alpha + (2+alpha)(q/p - 1))");
    c.app->add_option("--heights", s->heights, "sample heights, log-spaced")->capture_default_str();
    c.app->add_option("--ymin", s->y_min, "lowest sample height")->capture_default_str();
    c.app->add_option("--ymax", s->y_max, "highest sample height")->capture_default_str();
    c.app->add_option("--max-spread", s->spread, "allowed max/min - 1 of each Schur ratio")->capture_default_str();
    c.run = [s, beta, &c](CsvTable& t) {
        OffDiagonalConfig cfg = OffDiagonalConfig::with_default_target(s->p, s->q, s->alpha, s->a);
        if (beta->count() > 0) cfg.beta_tgt = s->beta;
        cfg.validate();
        if (s->heights < 2 || !(s->y_min > 0.0) || !(s->y_max > s->y_min)) {
            throw InputError("--heights/--ymin/--ymax: need at least 2 heights in a positive range");
        }
        const SchurParameters sp = solve_rst(cfg);
        std::vector<HalfPlanePoint> zs;
        for (std::size_t i = 0; i < s->heights; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(s->heights - 1);
            zs.emplace_back(0.3 * static_cast<double>(i) - 1.0, s->y_min * std::pow(s->y_max / s->y_min, u));
        }
        const SchurReport r = verify_schur_conditions(cfg, sp, zs, c.common.qc());
        t = CsvTable("schur", {"p", "q", "alpha", "beta", "a", "b", "r", "s", "t", "first_chain", "second_chain",
                               "first_spread", "second_spread", "m1", "m2", "converged"});
        t.row().cell(cfg.p).cell(cfg.q).cell(cfg.alpha_src).cell(cfg.beta_tgt).cell(cfg.a).cell(cfg.b());
        t.cell(sp.r).cell(sp.s).cell(sp.t).cell(first_chain_defect(cfg, sp)).cell(second_chain_defect(cfg, sp));
        t.cell(r.first_spread).cell(r.second_spread).cell(r.m1).cell(r.m2).cell(r.converged);
        std::string line = "schur: r=" + fmt(sp.r) + " s=" + fmt(sp.s) + " t=" + fmt(sp.t) + ", spreads " +
                           fmt(r.first_spread) + " and " + fmt(r.second_spread) + ", M1 M2 = " + fmt(r.m1 * r.m2);
        if (!(r.first_spread < s->spread && r.second_spread < s->spread)) throw CheckFailed{line};
        return line;
    };
}

void def_lemma_scaling(Command& c) {
    struct S {
        double p = 2.0, nu = 0.0, gamma = 2.0;
        std::vector<double> ts{0.5, 1.0, 2.0, 4.0};
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--p", s->p, "exponent p")->capture_default_str();
    c.app->add_option("--nu", s->nu, "measure order nu")->capture_default_str();
    c.app->add_option("--gamma", s->gamma, "kernel power gamma")->capture_default_str();
    c.app->add_option("--t", s->ts, "shifts t (repeatable)")->capture_default_str();
    c.run = [s, &c](CsvTable& t) {
        const LemmaScaling r = lemma_norm_scaling(s->p, s->nu, s->gamma, s->ts, c.common.qc());
        t = CsvTable("lemma-scaling", {"p", "nu", "gamma", "t", "norm_p", "slope", "expected_slope"});
        for (std::size_t i = 0; i < r.t_values.size(); ++i) {
            t.row().cell(s->p).cell(s->nu).cell(s->gamma).cell(r.t_values[i]).cell(r.norms[i]);
            t.cell(r.fit.slope).cell(r.expected_slope);
        }
        return "lemma-scaling: slope " + fmt(r.fit.slope) + ", expected " + fmt(r.expected_slope);
    };
}

void def_sharpness(Command& c) {
    struct S {
        double p = 2.0, q = 0.0, alpha = 0.0, a = 0.0;
        std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
        int depth = 12;
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--p", s->p, "source exponent")->capture_default_str();
    auto* q = c.app->add_option("--q", s->q, "target exponent (default: balanced from p, alpha, a)");
    c.app->add_option("--alpha", s->alpha, "measure order")->capture_default_str();
    c.app->add_option("--a", s->a, "fractional order")->capture_default_str();
    c.app->add_option("--delta", s->deltas, "deltas, decreasing (repeatable)")->capture_default_str();
    c.app->add_option("--depth", s->depth, "search family depth")->capture_default_str();
    c.run = [s, q, &c](CsvTable& t) {
        SharpnessConfig sc;
        sc.cfg = q->count() > 0 ? ExponentConfig{s->p, s->q, s->alpha, s->a, true}
                                : ExponentConfig::make_balanced(s->p, s->alpha, s->a);
        sc.deltas = s->deltas;
        sc.qc = c.common.qc();
        sc.search.depth = s->depth;
        const SharpnessResult r = sharpness_run(sc);
        t = CsvTable("sharpness", {"p", "q", "alpha", "a", "delta", "weight_constant", "source_norm", "target_norm",
                                   "ratio", "converged", "weight_slope", "source_slope", "ratio_slope",
                                   "expected_weight_slope", "expected_source_slope", "expected_ratio_slope", "error"});
        auto slope = [](const std::optional<FitResult>& f) { return f ? f->slope : NAN; };
        for (const auto& row : r.rows) {
            t.row().cell(r.cfg.p).cell(r.cfg.q).cell(r.cfg.alpha).cell(r.cfg.a).cell(row.delta);
            t.cell(row.weight_constant).cell(row.source_norm).cell(row.target_norm).cell(row.ratio).cell(row.converged);
            t.cell(slope(r.weight_fit)).cell(slope(r.source_fit)).cell(slope(r.ratio_fit));
            t.cell(r.expected_weight_slope).cell(r.expected_source_slope).cell(r.expected_ratio_slope).cell(row.error);
        }
        if (!r.weight_fit) return std::string("sharpness: fewer than 3 rows succeeded, no fit");
        return "sharpness: slopes weight " + fmt(r.weight_fit->slope) + " (" + fmt(r.expected_weight_slope) +
               "), source " + fmt(r.source_fit->slope) + " (" + fmt(r.expected_source_slope) + "), ratio " +
               fmt(r.ratio_fit->slope) + " (>= " + fmt(r.expected_ratio_slope) + ")";
    };
}

void def_offdiag(Command& c) {
    struct S {
        std::vector<std::string> cases{"2,2,0,0", "2,4,0,0", "2,2,0.5,-0.6"};
        std::vector<double> truncations = default_truncations();
    };
    auto s = std::make_shared<S>();
    c.app->add_option("--case", s->cases, "p,q,alpha,a or p,q,alpha,a,beta (repeatable)")->capture_default_str();
    c.app->add_option("--truncation", s->truncations, "source cut-off heights 1/L (repeatable)")
        ->capture_default_str();
    c.run = [s, &c](CsvTable& t) {
        std::vector<OffDiagonalCase> cases;
        for (const auto& text : s->cases) {
            const auto v = split_numbers(text, "--case");
            if (v.size() != 4 && v.size() != 5) throw InputError("--case: expected 4 or 5 numbers, got '" + text + "'");
            OffDiagonalConfig cfg = OffDiagonalConfig::with_default_target(v[0], v[1], v[2], v[3]);
            if (v.size() == 5) cfg.beta_tgt = v[4];
            cases.push_back({cfg, std::nullopt});
        }
        const auto rows = offdiag_sweep(cases, s->truncations, c.common.qc());
        t = CsvTable("offdiag-sweep", {"p", "q", "alpha", "beta", "a", "b", "admissible", "source_power",
                                       "truncation", "ratio", "spread", "growth", "verdict", "error"});
        std::size_t wrong = 0;
        for (const auto& row : rows) {
            std::string verdict = row.stable ? "stable" : row.growing ? "growing" : "undecided";
            if (!row.error.empty()) verdict = "error";
            const bool ok = row.error.empty() && (row.admissible ? row.stable : row.growing);
            if (!ok) ++wrong;
            for (std::size_t i = 0; i < row.truncations.size(); ++i) {
                t.row().cell(row.cfg.p).cell(row.cfg.q).cell(row.cfg.alpha_src).cell(row.cfg.beta_tgt).cell(row.cfg.a);
                t.cell(row.cfg.b()).cell(row.admissible).cell(row.source_power).cell(row.truncations[i]);
                t.cell(i < row.ratios.size() ? row.ratios[i] : NAN).cell(row.spread).cell(row.growth).cell(verdict);
                t.cell(row.error);
            }
        }
        std::string line = "offdiag-sweep: " + std::to_string(rows.size() - wrong) + " of " +
                           std::to_string(rows.size()) + " configurations classified as the exponents predict";
        if (wrong > 0) throw CheckFailed{line};
        return line;
    };
}

void def_tiling(Command& c) {
    struct S {
        Grid g;
        std::string region = "-4,4,0.015625,8";
        std::size_t samples = 10000;
        std::uint64_t seed = 1;
    };
    auto s = std::make_shared<S>();
    add_grid(c.app, s->g, true);
    c.app->add_option("--region", s->region, "sampling region x0,x1,y0,y1")->capture_default_str();
    c.app->add_option("--samples", s->samples, "number of samples")->capture_default_str();
    c.app->add_option("--seed", s->seed, "sampling seed")->capture_default_str();
    c.run = [s](CsvTable& t) {
        const auto v = split_exact(s->region, 4, "--region");
        const TruncatedGrid g = s->g.grid();
        const TilingReport r = tent_tiling_check(g, Rect{v[0], v[1], v[2], v[3]}, s->samples, s->seed);
        t = CsvTable("tiling-check", {"beta", "j_min", "j_max", "x0", "x1", "y0", "y1", "samples", "violations"});
        t.row().cell(s->g.beta).cell(g.j_min).cell(g.j_max).cell(v[0]).cell(v[1]).cell(v[2]).cell(v[3]);
        t.cell(r.samples).cell(r.violations);
        std::string line = "tiling-check: " + std::to_string(r.violations) + " of " + std::to_string(r.samples) +
                           " samples not in exactly one tent";
        if (r.violations > 0) throw CheckFailed{line};
        return line;
    };
}

void write_table(const CsvTable& t, const std::string& path, std::ostream& out) {
    if (path == "-") {
        t.write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("--output: cannot open '" + path + "' for writing");
    t.write(f);
    if (!f.flush()) throw InputError("--output: write to '" + path + "' failed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted Bergman-type operators on the upper half-plane: experiments and checks", "bergman"};
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "INI file, one [section] per subcommand; flags override it");
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    auto add = [&](const std::string& name, const std::string& help, double tol, void (*def)(Command&)) {
        auto c = std::make_unique<Command>();
        c->app = app.add_subcommand(name, help);
        add_common(c->app, c->common, tol);
        def(*c);
        commands.push_back(std::move(c));
    };
    add("apply", "evaluate an operator at points", 1e-8, def_apply);
    add("norm-ratio", "||op f|| / ||f|| in weighted Lebesgue spaces", 1e-6, def_norm_ratio);
    add("weight-constant", "B_{p,q,alpha} or B_{p,alpha} constant over the search family", 1e-8, def_weight_constant);
    add("dyadic-apply", "dyadic model operator at points", 1e-8, def_dyadic_apply);
    add("domination", "S f against Q^0 f + Q^{1/3} f at random points", 1e-8, def_domination);
    add("maximal", "check M f <= S |f| at random points", 1e-8, def_maximal);
    add("schur", "Schur test parameters and constants for T+", 1e-8, def_schur);
    add("lemma-scaling", "norms of shifted kernel powers against t", 1e-8, def_lemma_scaling);
    add("sharpness", "sharp-exponent experiment over delta", 1e-6, def_sharpness);
    add("offdiag-sweep", "admissibility dichotomy under truncation", 1e-6, def_offdiag);
    add("tiling-check", "tents of one grid tile the half-plane", 1e-8, def_tiling);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    for (auto& c : commands) {
        if (!c->app->parsed()) continue;
        const bool csv_to_out = c->common.output == "-";
        std::ostream& summary = csv_to_out ? err : out;
        CsvTable table;
        try {
            const std::string line = c->run(table);
            write_table(table, c->common.output, out);
            summary << line << '\n';
            return kOk;
        } catch (const CheckFailed& f) {
            if (!table.columns().empty()) write_table(table, c->common.output, out);
            summary << f.what << '\n';
            err << "check failed\n";
            return kCheckFailed;
        } catch (const InputError& e) {
            err << "error: " << e.what() << '\n';
            return kUsage;
        } catch (const Error& e) {
            err << "numerical error: " << e.what() << '\n';
            return kNumerical;
        }
    }
    return kUsage;
}

}  // namespace bergman::cli
