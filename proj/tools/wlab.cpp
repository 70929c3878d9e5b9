// wlab: weighted-norm inequality laboratory.
//
// Subcommands:
//   constants  -- weight-class constants for the weights in a config
//   verify     -- theorem-level ratio experiments, JSON + CSV reports
//   search     -- derivative-free extremal search over weight families
//
// Exit codes: 0 success / all checks pass, 1 inequality violation,
// 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wlab/constants.hpp"
#include "wlab/families.hpp"
#include "wlab/parallel.hpp"
#include "wlab/search.hpp"
#include "wlab/verify.hpp"
#include "wlab/weights.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> window_K, window_L, dim;
    std::optional<double> cn;
};

nlohmann::json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw wlab::ConfigError("cannot open config: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw wlab::ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

void apply_overrides(nlohmann::json& j, const CommonOpts& opt) {
    if (!j.contains("window")) j["window"] = nlohmann::json::object();
    if (opt.window_K) j["window"]["K"] = *opt.window_K;
    if (opt.window_L) j["window"]["L"] = *opt.window_L;
    if (opt.dim) j["window"]["n"] = *opt.dim;
    if (opt.seed) j["seed"] = *opt.seed;
}

wlab::Window window_from(const nlohmann::json& j) {
    int n = 1, K = 4, L = 6;
    if (j.contains("window")) {
        n = j["window"].value("n", 1);
        K = j["window"].value("K", 4);
        L = j["window"].value("L", 6);
    }
    return wlab::Window(n, K, L);
}

void emit(const CommonOpts& opt, const std::string& name,
          const std::string& content) {
    if (opt.out_dir.empty()) {
        std::cout << content;
    } else {
        wlab::write_file_atomic(opt.out_dir + "/" + name, content);
    }
}

int cmd_constants(const CommonOpts& opt, const wlab::ConstantsConfig& ccfg) {
    nlohmann::json cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    wlab::Window win = window_from(cfg);
    if (!cfg.contains("weights") || !cfg["weights"].is_array() ||
        cfg["weights"].empty())
        throw wlab::ConfigError("config needs field: weights (array)");
    std::vector<double> p_list;
    if (cfg.contains("exponents") && cfg["exponents"].contains("p_list"))
        p_list = cfg["exponents"]["p_list"].get<std::vector<double>>();
    if (p_list.empty())
        throw wlab::ConfigError(
            "config needs field: exponents.p_list (A_p constants need p)");

    std::uint64_t seed = cfg.value("seed", std::uint64_t(1));
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    std::size_t idx = 0;
    for (const auto& spec : cfg["weights"]) {
        wlab::Rng rng = wlab::Rng::stream(seed, idx);
        wlab::GridFunction w = wlab::fam::build_weight(win, spec, rng);
        nlohmann::ordered_json entry;
        entry["spec"] = spec;
        entry["a1"] = wlab::a1_constant(w);
        entry["rh_inf"] = wlab::rh_inf(w);
        // Quadratic per cube; skipped beyond 4096 cells.
        if (win.cell_count() <= 4096)
            entry["fujii_wilson"] = wlab::fujii_wilson(w);
        else
            entry["fujii_wilson"] = nullptr;
        nlohmann::ordered_json per_p = nlohmann::ordered_json::array();
        for (double p : p_list) {
            nlohmann::ordered_json pe;
            pe["p"] = p;
            if (p > 1) {
                pe["ap"] = wlab::ap_constant(w, p);
                pe["rh_s"] = wlab::rh_constant(w, p);
            }
            auto pair = wlab::apr_both(w, p);
            pe["apr_bracket"] = pair.bracket;
            pe["apr_double_bar"] = pair.double_bar;
            per_p.push_back(pe);
        }
        entry["per_p"] = per_p;
        // Smallest A_r exponent scan for RH_inf-style weights, reported only.
        std::vector<double> grid{1.1, 1.5, 2.0, 3.0, 5.0, 8.0};
        auto scan = wlab::smallest_ap_exponent(w, grid, 1e6);
        if (scan.found) {
            entry["smallest_ar"] = {{"r", scan.r}, {"value", scan.value}};
        }
        out.push_back(entry);
        ++idx;
    }
    (void)ccfg;
    emit(opt, "constants.json", out.dump(2) + "\n");
    return 0;
}

int cmd_verify(const CommonOpts& opt, const wlab::ConstantsConfig& ccfg) {
    nlohmann::json cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    wlab::ExperimentSpec spec = wlab::ExperimentSpec::from_json(cfg);
    auto reports = wlab::run_experiments(spec, ccfg);

    emit(opt, "report.json", wlab::reports_to_json(reports));
    emit(opt, "report.csv", wlab::reports_to_csv(reports));

    bool all_pass = true;
    for (const auto& r : reports) all_pass = all_pass && r.pass;
    if (!all_pass) {
        nlohmann::ordered_json viol = nlohmann::ordered_json::array();
        for (const auto& r : reports)
            if (!r.pass) {
                nlohmann::ordered_json v;
                v["kind"] = "VIOLATION";
                v["theorem"] = r.theorem;
                v["witness"] = r.witness;
                v["empirical_C"] = r.empirical_C;
                if (r.constant)
                    v["theoretical_log10"] = r.constant->log10_value;
                v["spec"] = cfg;
                viol.push_back(v);
            }
        emit(opt, "violations.json", viol.dump(2) + "\n");
        return 1;
    }
    return 0;
}

int cmd_search(const CommonOpts& opt, const wlab::ConstantsConfig& ccfg) {
    nlohmann::json cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    wlab::Window win = window_from(cfg);
    std::string objective = cfg.value("objective", "");
    int budget = cfg.value("budget", 0);
    int restarts = cfg.value("restarts", 4);
    int samples = cfg.value("samples", 8);
    std::uint64_t seed = cfg.value("seed", std::uint64_t(1));
    if (budget < 50)
        throw wlab::ConfigError("search budget must be at least 50");

    std::vector<double> p_list{2.0, 2.0};
    if (cfg.contains("exponents") && cfg["exponents"].contains("p_list"))
        p_list = cfg["exponents"]["p_list"].get<std::vector<double>>();

    wlab::ParamFamily family;
    if (objective == "kolmogorov") {
        double p = p_list[0];
        double r = cfg.value("exponents", nlohmann::json::object())
                       .value("r", 0.5 * p);
        family = wlab::kolmogorov_slack_family(win, p, r, cfg.value("levels", 4));
    } else if (objective == "sawyer") {
        family = wlab::sawyer_ratio_family(win, p_list[0], samples, seed);
    } else if (objective == "conjecture") {
        if (p_list.size() < 2) p_list = {2.0, 2.0};
        family = wlab::conjecture_family(win, wlab::ExponentTuple(p_list),
                                         samples, seed);
    } else {
        throw wlab::ConfigError("unknown search objective: " + objective);
    }

    auto result = wlab::maximize_ratio(family, budget, restarts, seed);
    emit(opt, "search.json", wlab::search_result_json(result).dump(2) + "\n");
    {
        std::string csv = "evaluation,best_ratio\n";
        for (std::size_t i = 0; i < result.trace.size(); ++i)
            csv += std::to_string(i) + "," + std::to_string(result.trace[i]) +
                   "\n";
        emit(opt, "search_trace.csv", csv);
    }

    // Sawyer-type objectives carry a theoretical cap; exceeding it is a
    // build-stopping finding, never clipped.
    if (objective == "sawyer") {
        double p = p_list[0];
        wlab::GridFunction u =
            wlab::fam::step_blocks(win, {result.best_params[0], result.best_params[1]});
        wlab::GridFunction v =
            wlab::fam::step_blocks(win, {result.best_params[2], result.best_params[3]});
        wlab::GridFunction ws = wlab::GridFunction::multiply(u, v.pow(p));
        double A = p == 1.0 ? wlab::a1_constant(u) : wlab::apr_bracket(u, p);
        double B = wlab::apr_bracket(ws, 2.0);
        wlab::LogValue C = wlab::script_E(win.n, 2.0, p, std::max(A, 1.0),
                                          std::max(B, 1.0), ccfg);
        if (result.best_ratio > 0 &&
            std::log10(result.best_ratio) > C.log10() + 1e-9) {
            emit(opt, "violation.json",
                 wlab::violation_payload(result, C.log10(), cfg).dump(2) + "\n");
            return 1;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-norm inequality laboratory"};
    app.require_subcommand(1);

    CommonOpts opt;
    wlab::ConstantsConfig ccfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "config JSON path")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "seed override");
        sub->add_option("--threads", opt.threads, "worker threads");
        sub->add_option("--window-K", opt.window_K, "resolution exponent");
        sub->add_option("--window-L", opt.window_L, "half-extent exponent");
        sub->add_option("--dim", opt.dim, "dimension (1 or 2)")
            ->check(CLI::Range(1, 2));
        sub->add_option("--cn", opt.cn, "c_n constant override");
    };

    CLI::App* c_const = app.add_subcommand("constants", "weight constants");
    CLI::App* c_verify = app.add_subcommand("verify", "ratio experiments");
    CLI::App* c_search = app.add_subcommand("search", "extremal search");
    add_common(c_const);
    add_common(c_verify);
    add_common(c_search);

    CLI11_PARSE(app, argc, argv);

    if (opt.threads) wlab::set_threads(*opt.threads);
    if (opt.cn) ccfg.c_n_override = *opt.cn;

    try {
        if (c_const->parsed()) return cmd_constants(opt, ccfg);
        if (c_verify->parsed()) return cmd_verify(opt, ccfg);
        if (c_search->parsed()) return cmd_search(opt, ccfg);
    } catch (const wlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wlab::MissingInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
