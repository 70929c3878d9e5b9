#include "wlab/families.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/operators.hpp"

namespace wlab::fam {

GridFunction power_abs(const Window& w, double a) {
    if (w.n != 1) throw ConfigError("power weights are 1D fixtures");
    if (a <= -1.0) throw BadExponent("power exponent must exceed -1");
    std::int64_t h = w.half();
    double side = w.cell_side();
    auto prim = [a](double x) { return std::pow(x, a + 1.0) / (a + 1.0); };
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()));
    for (std::int64_t c = -h; c < h; ++c) {
        double x0 = static_cast<double>(c) * side;
        double x1 = static_cast<double>(c + 1) * side;
        double integral;
        if (x0 >= 0)
            integral = prim(x1) - prim(x0);
        else if (x1 <= 0)
            integral = prim(-x0) - prim(-x1);
        else
            integral = prim(-x0) + prim(x1);
        v[static_cast<std::size_t>(c + h)] = integral / side;
    }
    return GridFunction(w, std::move(v));
}

GridFunction step_blocks(const Window& w, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("step weight needs values");
    std::int64_t m = w.axis_cells();
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()));
    std::int64_t k = static_cast<std::int64_t>(values.size());
    for (std::int64_t i = 0; i < w.cell_count(); ++i) {
        std::int64_t ix = w.n == 1 ? i : i % m;
        std::int64_t block = std::min(k - 1, ix * k / m);
        v[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(block)];
    }
    return GridFunction(w, std::move(v));
}

GridFunction characteristic_interval(const Window& w, double x0, double x1) {
    if (w.n != 1) throw ConfigError("interval fixture is 1D");
    std::int64_t h = w.half();
    double side = w.cell_side();
    std::int64_t c0 = static_cast<std::int64_t>(std::floor(x0 / side));
    std::int64_t c1 = static_cast<std::int64_t>(std::ceil(x1 / side));
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()), 0.0);
    for (std::int64_t c = std::max(c0, -h); c < std::min(c1, h); ++c)
        v[static_cast<std::size_t>(c + h)] = 1.0;
    return GridFunction(w, std::move(v));
}

GridFunction mh_weight(const Window& w, const GridFunction& h, double e) {
    (void)w;
    return maximal(h, MaximalVariant::uncentered()).pow(e);
}

GridFunction counterexample_h(const Window& w, double p) {
    if (w.n != 1) throw ConfigError("counterexample fixture is 1D");
    GridFunction tail = power_abs(w, -1.0 / p);
    std::int64_t h = w.half();
    std::int64_t one = std::int64_t(1) << w.K;  // cells per unit length
    std::vector<double> v(tail.values().begin(), tail.values().end());
    for (std::int64_t c = -one; c < one; ++c)
        if (c >= -h && c < h) v[static_cast<std::size_t>(c + h)] = 0.0;
    return GridFunction(w, std::move(v));
}

GridFunction counterexample_v(const Window& w, double p) {
    GridFunction hh = counterexample_h(w, p);
    std::int64_t h = w.half();
    std::int64_t one = std::int64_t(1) << w.K;
    std::vector<double> v(hh.values().begin(), hh.values().end());
    for (std::int64_t c = -one; c < one; ++c)
        if (c >= -h && c < h) v[static_cast<std::size_t>(c + h)] = 1.0;
    return GridFunction(w, std::move(v));
}

namespace {

GridFunction random_cells(const Window& w, Rng& rng, double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()));
    for (auto& x : v) x = rng.log_uniform(lo, hi);
    return GridFunction(w, std::move(v));
}

GridFunction random_step(const Window& w, Rng& rng, int levels, double lo,
                         double hi) {
    std::vector<double> vals(static_cast<std::size_t>(levels));
    for (auto& x : vals) x = rng.log_uniform(lo, hi);
    return step_blocks(w, vals);
}

GridFunction random_characteristic(const Window& w, Rng& rng, int runs) {
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()), 0.0);
    for (int r = 0; r < runs; ++r) {
        std::size_t start = rng.below(v.size());
        std::size_t len = 1 + rng.below(std::max<std::size_t>(v.size() / 4, 1));
        for (std::size_t i = start; i < std::min(start + len, v.size()); ++i)
            v[i] = 1.0;
    }
    bool any = false;
    for (double x : v) any = any || x > 0;
    if (!any) v[rng.below(v.size())] = 1.0;
    return GridFunction(w, std::move(v));
}

}  // namespace

GridFunction build_weight(const Window& w, const nlohmann::json& spec,
                          Rng& rng) {
    std::string kind = spec.value("kind", "");
    if (kind == "ones") return GridFunction(w, 1.0);
    if (kind == "step") {
        if (spec.contains("values"))
            return step_blocks(w, spec.at("values").get<std::vector<double>>());
        int levels = spec.value("levels", 4);
        return random_step(w, rng, levels, spec.value("lo", 0.25),
                           spec.value("hi", 4.0));
    }
    if (kind == "power") {
        if (!spec.contains("a")) throw ConfigError("power weight needs field a");
        return power_abs(w, spec.at("a").get<double>());
    }
    if (kind == "mh") {
        if (!spec.contains("h")) throw ConfigError("mh weight needs field h");
        GridFunction h = build_function(w, spec.at("h"), rng);
        return mh_weight(w, h, spec.value("exponent", -1.0));
    }
    if (kind == "product") {
        if (!spec.contains("factors"))
            throw ConfigError("product weight needs field factors");
        GridFunction out(w, 1.0);
        for (const auto& f : spec.at("factors"))
            out = GridFunction::multiply(out, build_weight(w, f, rng));
        return out;
    }
    if (kind == "random")
        return random_cells(w, rng, spec.value("lo", 0.1),
                            spec.value("hi", 10.0));
    throw ConfigError("unknown weight kind: " + kind);
}

GridFunction build_function(const Window& w, const nlohmann::json& spec,
                            Rng& rng) {
    std::string kind = spec.value("kind", "");
    if (kind == "characteristic")
        return random_characteristic(w, rng, spec.value("runs", 3));
    if (kind == "characteristic_interval")
        return characteristic_interval(w, spec.value("x0", 0.0),
                                       spec.value("x1", 1.0));
    if (kind == "step")
        return random_step(w, rng, spec.value("levels", 6),
                           spec.value("lo", 0.01), spec.value("hi", 10.0));
    if (kind == "power") {
        if (!spec.contains("a"))
            throw ConfigError("power function needs field a");
        return power_abs(w, spec.at("a").get<double>());
    }
    if (kind == "mh") {
        GridFunction h = build_function(w, spec.at("h"), rng);
        return mh_weight(w, h, spec.value("exponent", 1.0));
    }
    if (kind == "random")
        return random_cells(w, rng, spec.value("lo", 0.01),
                            spec.value("hi", 10.0));
    if (kind == "ones") return GridFunction(w, 1.0);
    throw ConfigError("unknown function kind: " + kind);
}

}  // namespace wlab::fam
