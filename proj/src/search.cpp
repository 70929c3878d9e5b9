#include "wlab/search.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "wlab/families.hpp"
#include "wlab/lorentz.hpp"
#include "wlab/operators.hpp"
#include "wlab/parallel.hpp"
#include "wlab/rng.hpp"
#include "wlab/verify.hpp"
#include "wlab/weights.hpp"

namespace wlab {

namespace {

struct RestartOutcome {
    std::vector<double> params;
    double ratio = -1.0;
    std::vector<double> trace;
    int evaluations = 0;
};

RestartOutcome run_restart(const ParamFamily& fam, int budget,
                           std::uint64_t seed, int restart) {
    RestartOutcome out;
    std::size_t dim = fam.box.size();
    std::vector<double> x(dim), step(dim);
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(restart));
    for (std::size_t d = 0; d < dim; ++d) {
        auto [lo, hi] = fam.box[d];
        x[d] = restart == 0 ? 0.5 * (lo + hi) : rng.uniform(lo, hi);
        step[d] = 0.25 * (hi - lo);
    }
    auto eval = [&](std::span<const double> pt) {
        ++out.evaluations;
        double v = fam.objective(pt);
        if (v > out.ratio) {
            out.ratio = v;
            out.params.assign(pt.begin(), pt.end());
        }
        out.trace.push_back(out.ratio);
        return v;
    };
    double current = eval(x);
    if (dim == 0) return out;
    while (out.evaluations < budget) {
        bool improved = false;
        for (std::size_t d = 0; d < dim && out.evaluations < budget; ++d) {
            auto [lo, hi] = fam.box[d];
            for (double sign : {+1.0, -1.0}) {
                if (out.evaluations >= budget) break;
                double old = x[d];
                double cand = std::clamp(old + sign * step[d], lo, hi);
                if (cand == old) continue;
                x[d] = cand;
                double v = eval(x);
                if (v > current) {
                    current = v;
                    improved = true;
                    break;  // keep the move
                }
                x[d] = old;
            }
        }
        if (!improved) {
            double biggest = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                step[d] *= 0.5;
                auto [lo, hi] = fam.box[d];
                biggest = std::max(biggest, step[d] / std::max(hi - lo, 1e-300));
            }
            if (biggest < 1e-6) break;
        }
    }
    return out;
}

}  // namespace

SearchResult maximize_ratio(const ParamFamily& fam, int budget, int restarts,
                            std::uint64_t seed) {
    if (budget < 50) throw ConfigError("search budget must be at least 50");
    if (restarts < 1) throw ConfigError("search needs at least one restart");
    int per = std::max(budget / restarts, 1);

    std::vector<RestartOutcome> outs(static_cast<std::size_t>(restarts));
    parallel_ranges(restarts, [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t r = b; r < e; ++r)
            outs[static_cast<std::size_t>(r)] =
                run_restart(fam, per, seed, static_cast<int>(r));
    });

    SearchResult res;
    res.objective = fam.name;
    res.restarts = restarts;
    res.seed = seed;
    int best_restart = 0;
    for (int r = 0; r < restarts; ++r) {
        res.evaluations += outs[static_cast<std::size_t>(r)].evaluations;
        if (outs[static_cast<std::size_t>(r)].ratio >
            outs[static_cast<std::size_t>(best_restart)].ratio)
            best_restart = r;
    }
    const auto& best = outs[static_cast<std::size_t>(best_restart)];
    res.best_params = best.params;
    res.best_ratio = best.ratio;
    res.trace = best.trace;
    return res;
}

ParamFamily kolmogorov_slack_family(const Window& win, double p, double r,
                                    int levels) {
    ParamFamily fam;
    fam.name = "kolmogorov_slack";
    for (int i = 0; i < levels; ++i) fam.box.push_back({0.01, 10.0});
    GridFunction nu(win, 1.0);
    double factor = kolmogorov_factor(p, r);
    fam.objective = [win, nu, p, r, factor](std::span<const double> q) {
        std::vector<double> vals(q.begin(), q.end());
        GridFunction f = fam::step_blocks(win, vals);
        double triple = norm_triple(f, nu, p, r);
        if (!(triple > 0)) return 0.0;
        return factor * norm_pinf(f, nu, p) / triple;
    };
    return fam;
}

ParamFamily sawyer_ratio_family(const Window& win, double p, int samples,
                                std::uint64_t seed) {
    ParamFamily fam;
    fam.name = "sawyer_ratio";
    fam.box = {{0.1, 10.0}, {0.1, 10.0}, {0.1, 10.0}, {0.1, 10.0}};
    auto family = std::make_shared<std::vector<GridFunction>>();
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        nlohmann::json spec = {{"kind", i % 2 == 0 ? "characteristic" : "step"}};
        family->push_back(fam::build_function(win, spec, rng));
    }
    fam.objective = [win, p, family](std::span<const double> q) {
        GridFunction u = fam::step_blocks(win, {q[0], q[1]});
        GridFunction v = fam::step_blocks(win, {q[2], q[3]});
        if (!u.positive() || !v.positive())
            throw DegenerateFamily("non-positive weight in search point");
        GridFunction ws = GridFunction::multiply(u, v.pow(p));
        double best = 0.0;
        for (const auto& f : *family) {
            auto Mf = maximal(f, MaximalVariant::uncentered());
            std::vector<double> g(static_cast<std::size_t>(Mf.size()));
            for (std::int64_t i = 0; i < Mf.size(); ++i)
                g[static_cast<std::size_t>(i)] = Mf[i] / v[i];
            double lhs = norm_pinf(GridFunction(win, g), ws, p);
            double rhs = norm_p1(f, u, p);
            if (rhs > 0) best = std::max(best, lhs / rhs);
        }
        return best;
    };
    return fam;
}

ParamFamily conjecture_family(const Window& win, const ExponentTuple& P,
                              int samples, std::uint64_t seed, double apr_cap) {
    if (P.m() != 2) throw DimensionMismatch("conjecture probe uses m = 2");
    ParamFamily fam;
    fam.name = "conjecture_5_6";
    fam.box = {{0.1, 10.0}, {0.1, 10.0}, {0.1, 10.0}, {0.1, 10.0}};
    auto tuples =
        std::make_shared<std::vector<std::vector<GridFunction>>>();
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        nlohmann::json spec = {{"kind", i % 2 == 0 ? "characteristic" : "step"}};
        std::vector<GridFunction> tup;
        tup.push_back(fam::build_function(win, spec, rng));
        tup.push_back(fam::build_function(win, spec, rng));
        tuples->push_back(std::move(tup));
    }
    double p = P.p();
    auto plist = P.p_list;
    fam.objective = [win, p, plist, tuples, apr_cap](std::span<const double> q) {
        GridFunction w1 = fam::step_blocks(win, {q[0], 1.0});
        GridFunction w2 = fam::step_blocks(win, {1.0, q[1]});
        GridFunction nu = fam::step_blocks(win, {q[2], 1.0, q[3]});
        GridFunction v = fam::step_blocks(win, {1.0, q[3], 1.0, q[2]});
        if (!w1.positive() || !w2.positive() || !nu.positive() || !v.positive())
            throw DegenerateFamily("non-positive weight in search point");
        WeightVector wv;
        wv.weights = {w1, w2};
        wv.nu = nu;
        ExponentTuple P2(plist);
        double bracket = multilinear_apr(wv, P2, MultilinearVariant::Bracket);
        if (!(bracket > 0) || bracket > apr_cap)
            throw DegenerateFamily("multilinear bracket outside the screen");
        GridFunction measure = GridFunction::multiply(nu, v.pow(p));
        double best = 0.0;
        for (const auto& fs : *tuples) {
            GridFunction curly = multilinear_maximal(fs, false);
            std::vector<double> g(static_cast<std::size_t>(curly.size()));
            for (std::int64_t i = 0; i < curly.size(); ++i)
                g[static_cast<std::size_t>(i)] = curly[i] / v[i];
            double lhs = norm_pinf(GridFunction(win, g), measure, p);
            double rhs = 1.0;
            for (std::size_t i = 0; i < fs.size(); ++i)
                rhs *= norm_p1(fs[i], wv.weights[i], plist[i]);
            if (rhs > 0) best = std::max(best, lhs / rhs);
        }
        return best / bracket;
    };
    return fam;
}

nlohmann::ordered_json search_result_json(const SearchResult& r) {
    nlohmann::ordered_json j;
    j["objective"] = r.objective;
    j["best_params"] = r.best_params;
    j["best_ratio"] = r.best_ratio;
    j["evaluations"] = r.evaluations;
    j["restarts"] = r.restarts;
    j["seed"] = r.seed;
    j["trace"] = r.trace;
    return j;
}

nlohmann::ordered_json violation_payload(const SearchResult& r,
                                         double theoretical_log10,
                                         const nlohmann::json& spec) {
    nlohmann::ordered_json j;
    j["kind"] = "VIOLATION";
    j["objective"] = r.objective;
    j["best_ratio"] = r.best_ratio;
    j["theoretical_log10"] = theoretical_log10;
    j["best_params"] = r.best_params;
    j["seed"] = r.seed;
    j["spec"] = spec;
    return j;
}

std::vector<SharpnessRow> sharpness_scan(const Window& win,
                                         std::span<const double> p_grid,
                                         const nlohmann::json& weight_specs,
                                         int samples, std::uint64_t seed,
                                         const ConstantsConfig& cfg) {
    std::vector<SharpnessRow> rows;
    nlohmann::json specs = weight_specs;
    if (!specs.is_array() || specs.empty())
        specs = nlohmann::json::array({{{"kind", "step"}}});
    for (double p : p_grid) {
        for (const auto& wspec : specs) {
            Rng rng = Rng::stream(seed, rows.size());
            GridFunction u = fam::build_weight(win, wspec, rng);
            GridFunction ones(win, 1.0);
            std::vector<GridFunction> family;
            for (int i = 0; i < samples; ++i) {
                Rng fr = Rng::stream(seed ^ 0x5555, static_cast<std::uint64_t>(i));
                nlohmann::json fspec = {{"kind", i % 2 ? "step" : "characteristic"}};
                family.push_back(fam::build_function(win, fspec, fr));
            }
            RatioReport rep = check_sawyer(u, ones, p, family, 2.0, cfg);
            SharpnessRow row;
            row.theorem = "sawyer";
            row.p = p;
            row.family = wspec.value("kind", "?");
            row.empirical_C = rep.empirical_C;
            row.theoretical_log10 = rep.constant->log10_value;
            row.log10_gap =
                rep.constant->log10_value -
                (rep.empirical_C > 0 ? std::log10(rep.empirical_C) : 0.0);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sharpness_csv(std::span<const SharpnessRow> rows) {
    auto fmt = [](double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::string csv = "theorem,p,family,empirical_C,theoretical_log10_C,log10_gap\n";
    for (const auto& r : rows) {
        csv += r.theorem;
        csv += ',';
        csv += fmt(r.p);
        csv += ',';
        csv += r.family;
        csv += ',';
        csv += fmt(r.empirical_C);
        csv += ',';
        csv += fmt(r.theoretical_log10);
        csv += ',';
        csv += fmt(r.log10_gap);
        csv += '\n';
    }
    return csv;
}

}  // namespace wlab
