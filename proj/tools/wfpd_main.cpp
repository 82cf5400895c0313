// wfpd: batch front-end for the Wright-Fisher / Poisson-Dirichlet
// simulation and generator-verification toolkit.  Every subcommand is a
// pure function of (config, seed): reruns produce byte-identical files.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "wfpd/analysis.hpp"
#include "wfpd/chain.hpp"
#include "wfpd/diffusion.hpp"
#include "wfpd/export.hpp"
#include "wfpd/generators.hpp"
#include "wfpd/oracle.hpp"

using json = nlohmann::json;
using namespace wfpd;

namespace {

constexpr int kSchemaVersion = 1;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    bool print_config = false;
};

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file: " + path);
    json j;
    in >> j;
    return j;
}

// defaults <- file <- flags, deep for nested blocks.
json resolve_config(const json& defaults, const CommonFlags& flags,
                    const std::string& command) {
    json cfg = defaults;
    if (!flags.config_path.empty()) {
        cfg.merge_patch(load_config_file(flags.config_path));
    }
    if (flags.seed_set) cfg["seed"] = flags.seed;
    if (!flags.out_dir.empty()) cfg["out"] = flags.out_dir;
    if (!flags.format.empty()) cfg["format"] = flags.format;
    cfg["schema_version"] = kSchemaVersion;
    cfg["command"] = command;
    return cfg;
}

Params params_from(const json& cfg) {
    return validate_params(cfg.at("theta").get<double>(),
                           cfg.at("alpha").get<double>(),
                           regime_from_name(cfg.at("regime").get<std::string>()));
}

std::filesystem::path ensure_out_dir(const json& cfg) {
    const std::filesystem::path dir = cfg.at("out").get<std::string>();
    std::filesystem::create_directories(dir);
    return dir;
}

std::string replicate_name(const char* stem, int r, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_r%03d.%s", stem, r, ext);
    return buf;
}

void write_summary(const std::filesystem::path& dir, const json& summary) {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
}

void for_each_replicate(int replicates, int jobs,
                        const std::function<void(int)>& body) {
    if (jobs <= 1 || replicates <= 1) {
        for (int r = 0; r < replicates; ++r) body(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int n_workers = std::min(jobs, replicates);
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&]() {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= replicates) return;
                body(r);
            }
        });
    }
    for (auto& t : workers) t.join();
}

// ---------------------------------------------------------------------------

int cmd_simulate_chain(const json& cfg, int jobs) {
    const Params params = params_from(cfg);
    const int K = cfg.at("K").get<int>();
    const std::int64_t N = cfg.at("N").get<std::int64_t>();
    const KernelConfig kernel(params, K, N);

    const std::int64_t steps = cfg.at("steps").get<std::int64_t>();
    const std::int64_t burn_in =
        cfg.at("burn_in").is_null() ? 10 * N : cfg.at("burn_in").get<std::int64_t>();
    const std::int64_t thin =
        cfg.at("thin").is_null() ? K : cfg.at("thin").get<std::int64_t>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int replicates = cfg.at("replicates").get<int>();
    const std::vector<int> phi_ms = cfg.at("phi_ms").get<std::vector<int>>();
    const std::string format = cfg.at("format").get<std::string>();
    const ChainConfig chain_cfg(kernel, seed, steps, burn_in, thin);

    const std::filesystem::path dir = ensure_out_dir(cfg);
    const std::string meta = cfg.dump();

    json reps = json::array();
    std::vector<json> rep_results(static_cast<std::size_t>(replicates));
    for_each_replicate(replicates, jobs, [&](int r) {
        const ChainPath path = run_chain(
            DiscreteSimplexState::balanced(K, N), chain_cfg,
            static_cast<std::uint64_t>(r));
        if (format == "jsonl") {
            write_chain_jsonl(dir / replicate_name("chain", r, "jsonl"), path, meta);
        } else {
            write_chain_csv(dir / replicate_name("chain", r, "csv"), path, meta);
        }
        json rep;
        rep["replicate"] = r;
        rep["final_counts"] = path.states.back().counts();
        if (static_cast<std::int64_t>(path.states.size()) >= 16) {
            json erg = json::object();
            for (int m : phi_ms) {
                const ErgodicEstimate est = ergodic_average(
                    path, [m](const SimplexState& z) { return phi(z, m); });
                erg["phi_" + std::to_string(m)] = {{"mean", est.mean},
                                                   {"stderr", est.std_error},
                                                   {"n", est.n}};
            }
            rep["ergodic"] = erg;
        }
        rep_results[static_cast<std::size_t>(r)] = std::move(rep);
    });
    for (auto& r : rep_results) reps.push_back(std::move(r));

    json summary;
    summary["config"] = cfg;
    summary["replicates"] = reps;
    write_summary(dir, summary);
    return 0;
}

int cmd_simulate_diffusion(const json& cfg, int jobs) {
    const Params params = params_from(cfg);
    const int K = cfg.at("K").get<int>();
    const double t_end = cfg.at("t_end").get<double>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const int replicates = cfg.at("replicates").get<int>();
    const bool ranked = cfg.at("ranked").get<bool>();

    const DiffusionConfig dcfg =
        cfg.at("dt").is_null()
            ? DiffusionConfig::with_default_dt(params, K, t_end, seed)
            : DiffusionConfig(params, K, cfg.at("dt").get<double>(), t_end, seed);

    const std::filesystem::path dir = ensure_out_dir(cfg);
    json effective = cfg;
    effective["dt"] = dcfg.dt;
    const std::string meta = effective.dump();

    std::vector<json> rep_results(static_cast<std::size_t>(replicates));
    for_each_replicate(replicates, jobs, [&](int r) {
        const auto path = run_diffusion(SimplexState::uniform(K), dcfg,
                                        static_cast<std::uint64_t>(r));
        write_diffusion_csv(dir / replicate_name("diffusion", r, "csv"), path,
                            dcfg.dt, meta);
        json rep;
        rep["replicate"] = r;
        rep["final_state"] = path.back().freqs();
        rep["final_phi_2"] = phi(path.back(), 2.0);
        if (ranked) {
            const auto rpath = ranked_path(path);
            write_ranked_csv(dir / replicate_name("ranked", r, "csv"), rpath,
                             dcfg.dt, meta);
            rep["mass_deficit"] = mass_deficit_statistic(rpath, dcfg.dt);
        }
        rep_results[static_cast<std::size_t>(r)] = std::move(rep);
    });

    json summary;
    summary["config"] = effective;
    summary["replicates"] = json(rep_results);
    write_summary(dir, summary);
    return 0;
}

int cmd_generator_gap(const json& cfg, int) {
    const Params params = params_from(cfg);
    const double m = cfg.at("m").get<double>();
    const std::vector<int> ks = cfg.at("K_values").get<std::vector<int>>();
    const long samples = cfg.at("samples").get<long>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

    const GapReport report = fit_gap_rate(m, ks, params, samples, seed);

    const std::filesystem::path dir = ensure_out_dir(cfg);
    const std::string meta = cfg.dump();
    write_gap_csv(dir / "gap.csv", report, params, meta);

    bool below_bound = true;
    for (std::size_t i = 0; i < report.K_values.size(); ++i) {
        below_bound = below_bound &&
                      report.sup_gaps[i] <=
                          rate_lemma_bound(m, report.K_values[i], params) + 1e-12;
    }
    json summary;
    summary["config"] = cfg;
    summary["fit_slope"] = report.fit_slope;
    summary["sup_gaps"] = report.sup_gaps;
    summary["K_values"] = report.K_values;
    summary["non_vanishing"] = report.fit_slope > -0.1;
    summary["all_below_bound"] = below_bound;
    write_summary(dir, summary);
    return 0;
}

int cmd_stationary_compare(const json& cfg, int jobs) {
    const Params params = params_from(cfg);
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const std::filesystem::path dir = ensure_out_dir(cfg);
    const std::string meta = cfg.dump();

    json summary;
    summary["config"] = cfg;

    if (cfg.contains("chain") && !cfg.at("chain").is_null()) {
        const json& c = cfg.at("chain");
        const int K = c.at("K").get<int>();
        const std::int64_t N = c.at("N").get<std::int64_t>();
        const std::int64_t steps = c.at("steps").get<std::int64_t>();
        const std::int64_t burn_in =
            c.at("burn_in").is_null() ? 10 * N : c.at("burn_in").get<std::int64_t>();
        const std::int64_t thin =
            c.at("thin").is_null() ? K : c.at("thin").get<std::int64_t>();
        const std::vector<int> m_list = c.at("m_list").get<std::vector<int>>();
        const double allowance = c.at("bias_allowance").get<double>();

        const ChainConfig chain_cfg(KernelConfig(params, K, N), seed, steps,
                                    burn_in, thin);
        const auto reports = stationary_compare_chain(chain_cfg, m_list);
        write_moment_csv(dir / "moments.csv", reports, meta);

        json moments = json::array();
        for (const MomentReport& r : reports) {
            const bool pass =
                std::abs(r.estimate - r.analytic) <= 4.0 * r.std_error + allowance;
            moments.push_back({{"m", r.m},
                               {"estimate", r.estimate},
                               {"stderr", r.std_error},
                               {"analytic", r.analytic},
                               {"z_score", r.z_score},
                               {"pass", pass}});
        }
        summary["moments"] = moments;
    }

    if (cfg.contains("ranked") && !cfg.at("ranked").is_null()) {
        const json& rk = cfg.at("ranked");
        const std::vector<int> ks = rk.at("K_values").get<std::vector<int>>();
        const long draws = rk.at("draws").get<long>();
        const int top_j = rk.at("top_j").get<int>();
        const double spacing = rk.at("spacing").get<double>();
        const int paths = rk.at("paths").get<int>();
        const long pd_draws = rk.at("pd_draws").get<long>();
        const double threshold = rk.at("threshold").get<double>();

        StickOptions opts;
        opts.residual_tol = 1e-8;
        opts.max_sticks = 100000;
        std::vector<PdSample> pd;
        pd.reserve(static_cast<std::size_t>(pd_draws));
        for (long d = 0; d < pd_draws; ++d) {
            RandomStream rng(seed + 1, static_cast<std::uint64_t>(d));
            pd.push_back(sample_pd(params, top_j, rng, opts));
        }

        std::vector<CompareReport> reports;
        json values = json::array();
        for (int K : ks) {
            const DiffusionConfig dcfg =
                DiffusionConfig::with_default_dt(params, K, 0.0, seed);
            const auto sample =
                diffusion_stationary_sample(dcfg, draws, spacing, paths, jobs);
            CompareReport rep = ranked_top_compare(sample, pd, top_j, threshold);
            values.push_back({{"K", K}, {"mean_abs_diff", rep.value}});
            reports.push_back(rep);
        }
        write_compare_csv(dir / "ranked_compare.csv", reports, meta);

        bool monotone = true;
        for (std::size_t i = 1; i < reports.size(); ++i) {
            monotone = monotone && reports[i].value < reports[i - 1].value;
        }
        summary["ranked"] = {{"values", values},
                             {"monotone_decreasing", monotone},
                             {"final_pass", reports.back().value <= threshold}};
    }

    write_summary(dir, summary);
    return 0;
}

int cmd_pd_sample(const json& cfg, int) {
    const Params params = params_from(cfg);
    const int J = cfg.at("J").get<int>();
    const long draws = cfg.at("draws").get<long>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    StickOptions opts;
    opts.residual_tol = cfg.at("residual_tol").get<double>();
    opts.max_sticks = cfg.at("max_sticks").get<long>();
    opts.fail_residual = cfg.at("fail_residual").get<double>();

    std::vector<PdSample> samples;
    samples.reserve(static_cast<std::size_t>(draws));
    double tail_sum = 0.0;
    for (long d = 0; d < draws; ++d) {
        RandomStream rng(seed, static_cast<std::uint64_t>(d));
        samples.push_back(sample_pd(params, J, rng, opts));
        tail_sum += samples.back().tail_mass;
    }

    const std::filesystem::path dir = ensure_out_dir(cfg);
    write_pd_csv(dir / "pd_samples.csv", samples, cfg.dump());

    json summary;
    summary["config"] = cfg;
    summary["mean_tail_mass"] = tail_sum / static_cast<double>(draws);
    write_summary(dir, summary);
    return 0;
}

// ---------------------------------------------------------------------------

json defaults_for(const std::string& command) {
    json base{{"theta", 1.0},  {"alpha", 0.3},    {"regime", "general"},
              {"seed", 1},     {"out", "out"},    {"format", "csv"}};
    if (command == "simulate-chain") {
        base.update(json{{"K", 2},
                         {"N", 100},
                         {"steps", 1000},
                         {"burn_in", nullptr},
                         {"thin", nullptr},
                         {"replicates", 1},
                         {"phi_ms", json::array({2, 3})}});
    } else if (command == "simulate-diffusion") {
        base.update(json{{"K", 3},
                         {"dt", nullptr},
                         {"t_end", 1.0},
                         {"replicates", 1},
                         {"ranked", false}});
    } else if (command == "generator-gap") {
        base.update(json{{"m", 2.5},
                         {"K_values", json::array({8, 16, 32, 64, 128, 256})},
                         {"samples", 20000}});
    } else if (command == "stationary-compare") {
        base["chain"] = json{{"K", 10},     {"N", 500},
                             {"steps", 50000}, {"burn_in", nullptr},
                             {"thin", nullptr}, {"m_list", json::array({2, 3})},
                             {"bias_allowance", 0.02}};
        base["ranked"] = nullptr;
    } else if (command == "pd-sample") {
        base.update(json{{"J", 10},
                         {"draws", 100},
                         {"residual_tol", 1e-12},
                         {"max_sticks", 1000000},
                         {"fail_residual", 1e-6}});
    }
    return base;
}

int dispatch(const std::string& command, const CommonFlags& flags) {
    const json cfg = resolve_config(defaults_for(command), flags, command);
    if (flags.print_config) {
        std::cout << cfg.dump(2) << "\n";
        return 0;
    }
    if (command == "simulate-chain") return cmd_simulate_chain(cfg, flags.jobs);
    if (command == "simulate-diffusion") return cmd_simulate_diffusion(cfg, flags.jobs);
    if (command == "generator-gap") return cmd_generator_gap(cfg, flags.jobs);
    if (command == "stationary-compare") return cmd_stationary_compare(cfg, flags.jobs);
    if (command == "pd-sample") return cmd_pd_sample(cfg, flags.jobs);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wright-Fisher construction of the two-parameter "
                 "Poisson-Dirichlet diffusion: simulation and numerical "
                 "verification"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string command;
    for (const char* name : {"simulate-chain", "simulate-diffusion",
                             "generator-gap", "stationary-compare", "pd-sample"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", flags.config_path, "JSON config file");
        sub->add_option("--out", flags.out_dir, "output directory");
        sub->add_option("--format", flags.format, "csv|jsonl|json")
            ->check(CLI::IsMember({"csv", "jsonl", "json"}));
        sub->add_option("--jobs", flags.jobs, "parallel replicate limit")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--print-config", flags.print_config,
                      "print the resolved config and exit");
        sub->add_option_function<std::uint64_t>(
            "--seed",
            [&flags](const std::uint64_t& s) {
                flags.seed = s;
                flags.seed_set = true;
            },
            "random seed (overrides config)");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return dispatch(command, flags);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const NonTermination& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
