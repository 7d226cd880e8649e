#include "srb/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "srb/curvature.hpp"
#include "srb/hyperbolicity.hpp"
#include "srb/measure.hpp"
#include "srb/parallel.hpp"

namespace srb::cli {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double x) {
    if (x == 0.0) return "0"; // normalize -0.0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

struct RunConfig {
    std::string command;
    std::string map_name;
    std::vector<double> params;
    std::vector<std::string> x0_raw; // numbers, or the single token "random"
    std::string m_raw = "auto";
    long n_steps = 100000;
    long burn_in = kDefaultBurnIn;
    std::uint64_t seed = 1;
    std::uint64_t seed2 = 2;
    std::vector<int> bins = {256};
    int k_bins = 2048;
    std::string observable = "const_one";
    std::vector<long> sweep;
    int sweep_seeds = 8;
    long benettin_t = 100000;
    double gap_tol = 0.05;
    int workers = 0; // 0 = resolve from SRB_GRAD_THREADS / hardware
    std::string out = "-";
    std::string json_out;

    // resolved pieces
    std::unique_ptr<MapSystem> map;
    Point x0;
    bool x0_was_random = true;
    int m = 1;
};

void resolve(RunConfig& cfg) {
    cfg.map = make_map(cfg.map_name, cfg.params);
    const int n = cfg.map->dim();

    if (cfg.workers <= 0) cfg.workers = default_workers();

    if (cfg.x0_raw.empty() || (cfg.x0_raw.size() == 1 && cfg.x0_raw[0] == "random")) {
        CounterRng rng(cfg.seed, /*stream=*/7);
        cfg.x0 = cfg.map->random_point(rng);
        cfg.x0_was_random = true;
    } else {
        if (static_cast<int>(cfg.x0_raw.size()) != n)
            throw Error("--x0 needs " + std::to_string(n) + " coordinates for map '" +
                        cfg.map_name + "'");
        cfg.x0.coords = Vec(n);
        for (int i = 0; i < n; ++i) {
            try {
                cfg.x0[i] = std::stod(cfg.x0_raw[i]);
            } catch (const std::exception&) {
                throw Error("--x0: cannot parse '" + cfg.x0_raw[i] + "' as a number");
            }
        }
        cfg.x0 = cfg.map->reduce(cfg.x0);
        cfg.x0_was_random = false;
    }

    if (cfg.m_raw == "auto") {
        const int hint = cfg.map->unstable_dim_hint();
        if (hint > 0) {
            cfg.m = hint;
        } else {
            const LESpectrum spec =
                benettin_le(*cfg.map, cfg.x0, n, cfg.benettin_t, cfg.burn_in, cfg.seed);
            cfg.m = detect_unstable_dim(spec, cfg.gap_tol);
        }
    } else {
        try {
            cfg.m = std::stoi(cfg.m_raw);
        } catch (const std::exception&) {
            throw Error("--m: expected an integer or 'auto', got '" + cfg.m_raw + "'");
        }
        if (cfg.m < 1 || cfg.m > n) throw Error("--m out of range for map dimension");
    }
}

std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& cfg) {
    auto join_d = [](const std::vector<double>& v) {
        std::string s;
        for (double d : v) s += (s.empty() ? "" : ",") + fmt17(d);
        return s.empty() ? std::string("-") : s;
    };
    std::vector<std::pair<std::string, std::string>> items;
    items.emplace_back("command", cfg.command);
    items.emplace_back("map", cfg.map_name);
    items.emplace_back("params", join_d(cfg.params));
    std::vector<double> x0v;
    for (int i = 0; i < cfg.x0.dim(); ++i) x0v.push_back(cfg.x0[i]);
    items.emplace_back("x0", join_d(x0v) + (cfg.x0_was_random ? " (random)" : ""));
    items.emplace_back("m", std::to_string(cfg.m));
    items.emplace_back("n_steps", std::to_string(cfg.n_steps));
    items.emplace_back("burn_in", std::to_string(cfg.burn_in));
    items.emplace_back("seed", std::to_string(cfg.seed));
    items.emplace_back("workers", std::to_string(cfg.workers));
    return items;
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = cfg.command;
    j["map"] = cfg.map_name;
    j["params"] = cfg.params;
    std::vector<double> x0v;
    for (int i = 0; i < cfg.x0.dim(); ++i) x0v.push_back(cfg.x0[i]);
    j["x0"] = x0v;
    j["x0_random"] = cfg.x0_was_random;
    j["m"] = cfg.m;
    j["n_steps"] = cfg.n_steps;
    j["burn_in"] = cfg.burn_in;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j;
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (path_ != "-") {
            file_.open(path_, std::ios::binary);
            if (!file_) throw Error("cannot open output file '" + path_ + "'");
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

private:
    std::string path_;
    std::ofstream file_;
};

void write_csv_header(std::ostream& os, const RunConfig& cfg,
                      const std::vector<std::pair<std::string, std::string>>& extra,
                      const std::string& columns) {
    os << "# srbgrad " << cfg.command << "\n";
    for (const auto& [k, v] : config_items(cfg)) os << "# " << k << " = " << v << "\n";
    for (const auto& [k, v] : extra) os << "# " << k << " = " << v << "\n";
    os << columns << "\n";
}

void write_json(const std::string& path, const ordered_json& j) {
    Output out(path);
    out.stream() << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- commands

int cmd_le(RunConfig& cfg) {
    const int n = cfg.map->dim();
    const int count_m = cfg.m_raw == "auto" ? n : cfg.m;
    const LESpectrum spec =
        benettin_le(*cfg.map, cfg.x0, count_m, cfg.n_steps, cfg.burn_in, cfg.seed);
    const int dim_u = detect_unstable_dim(spec, cfg.gap_tol);

    cfg.m = count_m;
    ordered_json j = config_json(cfg);
    j["t"] = spec.trajectory_length;
    j["exponents"] = spec.exponents;
    j["unstable_dim"] = dim_u;
    write_json(cfg.out, j);
    return 0;
}

int cmd_density_gradient(RunConfig& cfg) {
    Output out(cfg.out);
    std::ostream& os = out.stream();
    std::string cols = "step";
    for (int i = 0; i < cfg.map->dim(); ++i) cols += ",x" + std::to_string(i + 1);
    for (int i = 0; i < cfg.m; ++i) cols += ",g" + std::to_string(i + 1);
    write_csv_header(os, cfg, {}, cols);

    run_density_gradient(*cfg.map, cfg.x0, cfg.m, cfg.n_steps, cfg.burn_in, cfg.seed,
                         [&](const GradientSample& s) {
                             os << s.step;
                             for (int i = 0; i < s.point.dim(); ++i) os << ',' << fmt17(s.point[i]);
                             for (int i = 0; i < s.g.size(); ++i) os << ',' << fmt17(s.g[i]);
                             os << '\n';
                         });
    return 0;
}

int cmd_convergence(RunConfig& cfg) {
    cfg.burn_in = 0; // the transient is the object of study
    const auto series =
        convergence_diagnostic(*cfg.map, cfg.x0, cfg.m, cfg.n_steps, cfg.seed, cfg.seed2);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    write_csv_header(os, cfg, {{"seed2", std::to_string(cfg.seed2)}}, "k,norm");
    for (const auto& [k, norm] : series) os << k << ',' << fmt17(norm) << '\n';
    return 0;
}

ordered_json estimate_json(const MCEstimate& e) {
    ordered_json j;
    j["value"] = e.value;
    j["std_error"] = e.std_error();
    j["n"] = e.n_samples;
    return j;
}

int cmd_mc_integrate(RunConfig& cfg) {
    const Observable v = make_observable(cfg.observable);
    validate_observable(v, *cfg.map);

    if (cfg.sweep.empty()) {
        const McIntegralPair pair =
            mc_integrate_pair(*cfg.map, v, cfg.m, cfg.n_steps, cfg.burn_in, cfg.seed);
        ordered_json j = config_json(cfg);
        j["observable"] = cfg.observable;
        j["lhs"] = estimate_json(pair.lhs);
        j["rhs"] = estimate_json(pair.rhs);
        j["g_l2_norm"] = pair.g_l2_norm;
        write_json(cfg.out, j);
        return 0;
    }

    // error-vs-N sweep: sweep_seeds independent runs per N, one JSON per N
    struct Task {
        long n;
        int seed_idx;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i)
        for (int s = 0; s < cfg.sweep_seeds; ++s)
            tasks.push_back({cfg.sweep[i], s});
    auto results = parallel_tasks<McIntegralPair>(
        cfg.workers, static_cast<int>(tasks.size()), [&](int t) {
            const std::uint64_t run_seed =
                cfg.seed + 7919ULL * static_cast<std::uint64_t>(t + 1);
            return mc_integrate_pair(*cfg.map, v, cfg.m, tasks[t].n, cfg.burn_in, run_seed);
        });

    Output out(cfg.out);
    std::ostream& os = out.stream();
    std::size_t t = 0;
    for (long n : cfg.sweep) {
        ordered_json j;
        j["config"] = config_json(cfg);
        j["observable"] = cfg.observable;
        j["n_steps"] = n;
        ordered_json lhs = ordered_json::array(), rhs = ordered_json::array();
        ordered_json lse = ordered_json::array(), rse = ordered_json::array();
        for (int s = 0; s < cfg.sweep_seeds; ++s, ++t) {
            lhs.push_back(results[t].lhs.value);
            rhs.push_back(results[t].rhs.value);
            lse.push_back(results[t].lhs.std_error());
            rse.push_back(results[t].rhs.std_error());
        }
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["lhs_std_error"] = lse;
        j["rhs_std_error"] = rse;
        os << j.dump() << '\n';
    }
    return 0;
}

int cmd_histogram(RunConfig& cfg) {
    const int n = cfg.map->dim();
    std::vector<int> bins = cfg.bins;
    if (static_cast<int>(bins.size()) == 1) bins.assign(n, bins[0]);
    if (static_cast<int>(bins.size()) != n) throw Error("--bins arity does not match map dimension");

    EmpiricalDensity h =
        cfg.x0_was_random
            ? histogram_srb_ensemble(*cfg.map, cfg.n_steps, bins, cfg.burn_in, cfg.seed,
                                     cfg.workers)
            : histogram_srb(*cfg.map, cfg.x0, cfg.n_steps, bins, cfg.burn_in);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    os << "# srbgrad histogram\n";
    for (const auto& [k, v] : config_items(cfg)) os << "# " << k << " = " << v << "\n";
    os << "dims " << n;
    os << " bins";
    for (int b : bins) os << ' ' << b;
    os << " domain";
    for (int d = 0; d < n; ++d)
        os << ' ' << fmt17(cfg.map->domain(d).lo) << ' ' << fmt17(cfg.map->domain(d).hi);
    os << " total " << h.total() << "\n";

    // one line per leading index; trailing dimensions flattened row-major
    std::size_t per_line = 1;
    for (int d = 1; d < n; ++d) per_line *= bins[d];
    const auto& counts = h.counts();
    for (int i = 0; i < bins[0]; ++i) {
        for (std::size_t k = 0; k < per_line; ++k) {
            if (k) os << ' ';
            os << counts[i * per_line + k];
        }
        os << '\n';
    }
    return 0;
}

int cmd_hyperbolicity(RunConfig& cfg) {
    const AngleSeries series = stable_unstable_angles_ensemble(
        *cfg.map, cfg.m, cfg.n_steps, cfg.burn_in, cfg.seed, cfg.workers);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    write_csv_header(os, cfg, {}, "bin_center,pdf_value");
    for (std::size_t b = 0; b < series.pdf.size(); ++b)
        os << fmt17((b + 0.5) / series.pdf.size()) << ',' << fmt17(series.pdf[b]) << '\n';

    ordered_json j = config_json(cfg);
    j["min_d"] = series.min_d;
    j["frac_below_0.9"] = series.fraction_below(0.9);
    j["le_spectrum"] = series.le_spectrum;
    write_json(cfg.json_out.empty() ? "-" : cfg.json_out, j);
    return 0;
}

int cmd_appendix_1d(RunConfig& cfg) {
    if (cfg.map->dim() != 1) throw Error("appendix-1d requires a 1D map");

    GradientSeries1D series =
        cfg.x0_was_random
            ? binned_gradient_1d_ensemble(*cfg.map, cfg.n_steps, cfg.k_bins, cfg.burn_in,
                                          cfg.seed, cfg.workers)
            : binned_gradient_1d(*cfg.map, cfg.x0[0], cfg.n_steps, cfg.k_bins, cfg.burn_in);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    write_csv_header(os, cfg,
                     {{"k_bins", std::to_string(cfg.k_bins)},
                      {"skipped", std::to_string(series.skipped)}},
                     "bin_center,g_avg,count");
    for (int k = 0; k < series.bins; ++k) {
        const double avg = series.counts[k] > 0 ? series.average(k)
                                                : std::numeric_limits<double>::quiet_NaN();
        os << fmt17(series.center(k)) << ',' << fmt17(avg) << ',' << series.counts[k] << '\n';
    }
    return 0;
}

bool numerical_failure(const Error& e) {
    return dynamic_cast<const DegenerateBasis*>(&e) || dynamic_cast<const SingularR*>(&e) ||
           dynamic_cast<const NonFiniteState*>(&e) || dynamic_cast<const ZeroDerivative*>(&e) ||
           dynamic_cast<const DerivativeSingularity*>(&e) ||
           dynamic_cast<const SingularJacobian*>(&e) ||
           dynamic_cast<const AmbiguousSpectrum*>(&e) || dynamic_cast<const EmptyRow*>(&e) ||
           dynamic_cast<const DimensionMismatch*>(&e);
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"srbgrad: SRB density-gradient experiments on chaotic maps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key-value config file; flags override file values");

    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--map", cfg.map_name, "map name (see --help-maps)")->required();
        sub->add_option("--params", cfg.params, "map parameters")->delimiter(',');
        sub->add_option("--x0", cfg.x0_raw, "initial point coordinates, or 'random'")
            ->delimiter(',');
        sub->add_option("--m", cfg.m_raw, "unstable dimension, or 'auto'");
        sub->add_option("--steps", cfg.n_steps, "trajectory steps after burn-in");
        sub->add_option("--burn-in", cfg.burn_in, "steps discarded before recording");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--workers", cfg.workers,
                        "worker threads for ensemble tasks (default: SRB_GRAD_THREADS)");
        sub->add_option("--out", cfg.out, "output path, '-' for stdout");
        sub->add_option("--benettin-t", cfg.benettin_t, "trajectory length for m='auto'");
        sub->add_option("--gap-tol", cfg.gap_tol, "exponent gap tolerance for m='auto'");
        return sub;
    };

    auto* le = add_common(app.add_subcommand("le", "Lyapunov spectrum (JSON)"));
    auto* dg = add_common(
        app.add_subcommand("density-gradient", "per-step SRB density gradient (CSV)"));
    auto* cv = add_common(app.add_subcommand(
        "convergence", "norm of the gradient difference between two frame seeds (CSV)"));
    cv->add_option("--seed2", cfg.seed2, "frame seed of the second run");
    auto* mc = add_common(app.add_subcommand(
        "mc-integrate", "both sides of the unstable integration-by-parts identity (JSON)"));
    mc->add_option("--observable", cfg.observable, "registered observable name");
    mc->add_option("--sweep", cfg.sweep, "error-vs-N sweep: list of N values (JSONL out)")
        ->delimiter(',');
    mc->add_option("--sweep-seeds", cfg.sweep_seeds, "independent seeds per sweep point");
    auto* hs = add_common(
        app.add_subcommand("histogram", "trajectory-visit histogram (portable text)"));
    hs->add_option("--bins", cfg.bins, "bins per dimension (single value broadcasts)")
        ->delimiter(',');
    auto* hy = add_common(app.add_subcommand(
        "hyperbolicity", "stable/unstable angle distribution (CSV + JSON summary)"));
    hy->add_option("--json-out", cfg.json_out, "summary JSON path (default stdout)");
    auto* ap = add_common(app.add_subcommand(
        "appendix-1d", "binned 1D gradient estimator for two-to-one maps (CSV)"));
    ap->add_option("--k-bins", cfg.k_bins, "number of bins over [0,1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto* sub : {le, dg, cv, mc, hs, hy, ap})
            if (sub->parsed()) cfg.command = sub->get_name();
        resolve(cfg);
        if (le->parsed()) return cmd_le(cfg);
        if (dg->parsed()) return cmd_density_gradient(cfg);
        if (cv->parsed()) return cmd_convergence(cfg);
        if (mc->parsed()) return cmd_mc_integrate(cfg);
        if (hs->parsed()) return cmd_histogram(cfg);
        if (hy->parsed()) return cmd_hyperbolicity(cfg);
        if (ap->parsed()) return cmd_appendix_1d(cfg);
        return 2;
    } catch (const Error& e) {
        if (numerical_failure(e)) {
            std::cerr << "srbgrad: numerical failure: " << e.what() << "\n";
            return 3;
        }
        std::cerr << "srbgrad: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "srbgrad: error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace srb::cli
