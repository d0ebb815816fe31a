#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "unseen/serialize.hpp"

// Command-line front end. Subcommands: fingerprint, support, entropy,
// distinct, simulate. Every JSON result embeds the fully resolved
// configuration, defaults included. Exit codes: 0 success, 2 usage error,
// 1 data or numerical error.

namespace unseen::cli {

namespace detail {

inline void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open output file '" + path + "'");
    out << content;
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct CommonInput {
    std::string input;
    std::string format;
    std::string output;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "input file ('-' for stdin)")->required();
        cmd->add_option("--format", format, "input format")
            ->check(CLI::IsMember({"counts", "fingerprint", "text"}))
            ->required();
        cmd->add_option("--output", output, "output file (default stdout)");
    }

    Fingerprint load() const {
        if (input == "-") return parse_input(std::cin, parse_format(format));
        return parse_input(input, parse_format(format));
    }

    json config() const {
        return json{{"input", input},
                    {"format", format},
                    {"output", output.empty() ? "-" : output}};
    }
};

}  // namespace detail

inline int run(std::vector<std::string> args) {
    CLI::App app{"estimators for support size, distinct elements and entropy from sampled data"};
    app.require_subcommand(1);
    app.set_config("--config", "", "optional config file (ini; key = flag name)");

    // fingerprint ------------------------------------------------------
    auto* fp_cmd = app.add_subcommand("fingerprint", "ingest data and emit its fingerprint");
    detail::CommonInput fp_in;
    fp_in.attach(fp_cmd);
    std::string fp_out_format = "text";
    fp_cmd->add_option("--out-format", fp_out_format, "text (fingerprint file) or json")
        ->check(CLI::IsMember({"text", "json"}));

    // support ----------------------------------------------------------
    auto* sup_cmd = app.add_subcommand("support", "estimate the support size");
    detail::CommonInput sup_in;
    sup_in.attach(sup_cmd);
    std::string sup_estimator = "chebyshev";
    sup_cmd->add_option("--estimator", sup_estimator, "estimator")
        ->check(CLI::IsMember({"chebyshev", "chebyshev-adaptive", "plugin", "good-turing",
                               "chao1", "good-toulmin", "efron-thisted"}));
    std::uint64_t sup_k = 0;
    double sup_c0 = 0.45, sup_c1 = 0.5, sup_eps = 0.1, sup_t = 0.0;
    unsigned sup_J = 0;
    auto* sup_k_opt = sup_cmd->add_option("--k", sup_k, "bound: nonzero masses are >= 1/k");
    sup_cmd->add_option("--c0", sup_c0, "degree constant (default 0.45)");
    sup_cmd->add_option("--c1", sup_c1, "interval constant (default 0.5)");
    sup_cmd->add_option("--eps", sup_eps, "relative accuracy for chebyshev-adaptive");
    auto* sup_t_opt =
        sup_cmd->add_option("--t", sup_t, "extrapolation ratio (good-toulmin, efron-thisted)");
    auto* sup_J_opt = sup_cmd->add_option("--J", sup_J, "series cutoff (efron-thisted)");

    // entropy ----------------------------------------------------------
    auto* ent_cmd = app.add_subcommand("entropy", "estimate Shannon entropy (nats)");
    detail::CommonInput ent_in;
    ent_in.attach(ent_cmd);
    std::string ent_estimator = "poly";
    ent_cmd->add_option("--estimator", ent_estimator, "estimator")
        ->check(CLI::IsMember({"poly", "empirical", "miller-madow"}));
    std::uint64_t ent_k = 0;
    double ent_c0 = 1.6, ent_c1 = 3.5, ent_c2 = 1.6;
    bool ent_split = false, ent_adaptive = false, ent_bits = false;
    std::uint64_t ent_seed = 0;
    auto* ent_k_opt = ent_cmd->add_option("--k", ent_k, "alphabet size bound");
    ent_cmd->add_option("--c0", ent_c0, "degree constant (default 1.6)");
    ent_cmd->add_option("--c1", ent_c1, "interval constant (default 3.5)");
    ent_cmd->add_option("--c2", ent_c2, "threshold constant (default 1.6)");
    ent_cmd->add_flag("--split", ent_split, "coin-split the sample for selection");
    ent_cmd->add_flag("--adaptive", ent_adaptive, "agnostic to k: replace log k by log n");
    ent_cmd->add_flag("--bits", ent_bits, "also report the estimate in bits");
    ent_cmd->add_option("--seed", ent_seed, "seed for the split coins");

    // distinct ---------------------------------------------------------
    auto* dis_cmd = app.add_subcommand("distinct", "distinct elements in a k-ball urn");
    detail::CommonInput dis_in;
    dis_in.attach(dis_cmd);
    std::uint64_t dis_k = 0, dis_n = 0;
    double dis_alpha = 0.5, dis_beta = 1.0;
    dis_cmd->add_option("--k", dis_k, "number of balls in the urn")->required();
    dis_cmd->add_option("--n-expected", dis_n, "expected sample size (default: observed n)");
    dis_cmd->add_option("--alpha", dis_alpha, "degree constant (default 0.5)");
    dis_cmd->add_option("--beta", dis_beta, "grid constant, must exceed alpha (default 1.0)");

    // simulate ---------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo benchmark");
    std::string sim_family = "uniform", sim_mode = "iid", sim_estimators, sim_out_format = "csv";
    std::string sim_output;
    std::uint64_t sim_k = 0, sim_seed = 0;
    double sim_alpha = 1.0;
    std::vector<std::uint64_t> sim_n;
    unsigned sim_trials = 50, sim_threads = 1, sim_J = 10;
    double sim_c0 = 0.45, sim_c1 = 0.5, sim_ec0 = 1.6, sim_ec1 = 3.5, sim_ec2 = 1.6;
    double sim_t = 1.0, sim_eps = 0.1, sim_dalpha = 0.5, sim_dbeta = 1.0;
    bool sim_split = false;
    sim_cmd->add_option("--family", sim_family, "uniform | zipf | geo-zipf-mix")
        ->check(CLI::IsMember({"uniform", "zipf", "geo-zipf-mix"}));
    sim_cmd->add_option("--k", sim_k, "alphabet size")->required();
    sim_cmd->add_option("--alpha", sim_alpha, "Zipf exponent (default 1.0)");
    sim_cmd->add_option("--n", sim_n, "sample sizes (repeatable or comma-separated)")
        ->required()
        ->delimiter(',');
    sim_cmd->add_option("--trials", sim_trials, "trials per sample size (default 50)");
    sim_cmd->add_option("--mode", sim_mode, "iid | poissonized")
        ->check(CLI::IsMember({"iid", "poissonized"}));
    sim_cmd->add_option("--seed", sim_seed, "master seed");
    sim_cmd->add_option("--threads", sim_threads, "worker threads (default 1)");
    sim_cmd->add_option("--estimators", sim_estimators, "comma-separated estimator list")
        ->required();
    sim_cmd->add_option("--c0", sim_c0, "support degree constant");
    sim_cmd->add_option("--c1", sim_c1, "support interval constant");
    sim_cmd->add_option("--entropy-c0", sim_ec0, "entropy degree constant");
    sim_cmd->add_option("--entropy-c1", sim_ec1, "entropy interval constant");
    sim_cmd->add_option("--entropy-c2", sim_ec2, "entropy threshold constant");
    sim_cmd->add_option("--t", sim_t, "good-toulmin / efron-thisted ratio");
    sim_cmd->add_option("--J", sim_J, "efron-thisted cutoff");
    sim_cmd->add_option("--eps", sim_eps, "chebyshev-adaptive accuracy");
    sim_cmd->add_option("--dist-alpha", sim_dalpha, "distinct design constant");
    sim_cmd->add_option("--dist-beta", sim_dbeta, "distinct design constant");
    sim_cmd->add_flag("--split", sim_split, "entropy-poly sample splitting");
    sim_cmd->add_option("--out-format", sim_out_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sim_cmd->add_option("--output", sim_output, "output file (default stdout)");

    std::vector<const char*> argv;
    argv.push_back("unseen");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fp_cmd->parsed()) {
            const Fingerprint f = fp_in.load();
            if (fp_out_format == "json") {
                json rec = fingerprint_record(f);
                rec["config"] = fp_in.config();
                detail::write_output(fp_in.output, rec.dump(2) + "\n");
            } else {
                detail::write_output(fp_in.output, fingerprint_text(f));
            }
            return 0;
        }

        if (sup_cmd->parsed()) {
            if (sup_estimator == "chebyshev" && !*sup_k_opt) {
                std::cerr << "support: --k is required for the chebyshev estimator\n";
                return 2;
            }
            if ((sup_estimator == "good-toulmin" || sup_estimator == "efron-thisted") &&
                !*sup_t_opt) {
                std::cerr << "support: --t is required for " << sup_estimator << "\n";
                return 2;
            }
            if (sup_estimator == "efron-thisted" && !*sup_J_opt) {
                std::cerr << "support: --J is required for efron-thisted\n";
                return 2;
            }
            const Fingerprint f = sup_in.load();
            const std::uint64_t splug = plugin_support(f);
            json rec;
            if (sup_estimator == "chebyshev") {
                const LinearEstimator e = chebyshev_support_coeffs({sup_k, sup_c0, sup_c1}, f.n);
                rec = support_record("chebyshev", e, apply_linear(f, e, sup_k), f.n);
            } else if (sup_estimator == "chebyshev-adaptive") {
                const LinearEstimator e =
                    chebyshev_support_coeffs_adaptive(f.n, sup_eps, sup_c0, sup_c1);
                const std::uint64_t hi =
                    *sup_k_opt ? sup_k : std::numeric_limits<std::uint64_t>::max();
                rec = support_record("chebyshev-adaptive", e, apply_linear(f, e, hi), f.n);
                if (*sup_k_opt) rec["k"] = sup_k;
            } else if (sup_estimator == "plugin") {
                rec = baseline_record("plugin", f.n, static_cast<double>(splug), splug);
            } else if (sup_estimator == "good-turing") {
                const std::uint64_t v = good_turing_support(f);
                rec = baseline_record("good-turing", f.n, static_cast<double>(v), v);
            } else if (sup_estimator == "chao1") {
                const std::uint64_t v = chao1_support(f);
                rec = baseline_record("chao1", f.n, static_cast<double>(v), v);
            } else {
                // The raw series value may fall below the observed count; the
                // reported integer is clamped like the Chebyshev estimate.
                const double raw = sup_estimator == "good-toulmin"
                                       ? good_toulmin_support(f, sup_t)
                                       : efron_thisted_support(f, sup_t, sup_J);
                double rounded = std::floor(raw + 0.5);
                if (rounded < static_cast<double>(splug)) rounded = static_cast<double>(splug);
                if (*sup_k_opt && rounded > static_cast<double>(sup_k))
                    rounded = static_cast<double>(sup_k);
                rec = baseline_record(sup_estimator, f.n, raw,
                                      static_cast<std::uint64_t>(rounded));
                rec["t"] = sup_t;
                if (sup_estimator == "efron-thisted") rec["J"] = sup_J;
            }
            rec["config"] = sup_in.config();
            rec["config"]["estimator"] = sup_estimator;
            rec["config"]["k"] = sup_k;
            rec["config"]["c0"] = sup_c0;
            rec["config"]["c1"] = sup_c1;
            rec["config"]["eps"] = sup_eps;
            rec["config"]["t"] = sup_t;
            rec["config"]["J"] = sup_J;
            detail::write_output(sup_in.output, rec.dump(2) + "\n");
            return 0;
        }

        if (ent_cmd->parsed()) {
            if (!ent_adaptive && !*ent_k_opt) {
                std::cerr << "entropy: --k is required unless --adaptive is set\n";
                return 2;
            }
            const Fingerprint f = ent_in.load();
            const EntropyConfig cfg{ent_k, ent_c0, ent_c1, ent_c2, ent_split, ent_adaptive};
            double est = 0.0;
            if (ent_estimator == "poly")
                est = estimate_entropy(f, cfg, ent_seed);
            else if (ent_estimator == "empirical")
                est = empirical_entropy(f);
            else
                est = miller_madow(f);
            json rec = entropy_record(ent_estimator, cfg, f.n, est);
            if (ent_bits) rec["estimate_bits"] = est / std::log(2.0);
            rec["config"] = ent_in.config();
            rec["config"]["estimator"] = ent_estimator;
            rec["config"]["k"] = ent_k;
            rec["config"]["c0"] = ent_c0;
            rec["config"]["c1"] = ent_c1;
            rec["config"]["c2"] = ent_c2;
            rec["config"]["split"] = ent_split;
            rec["config"]["adaptive"] = ent_adaptive;
            rec["config"]["seed"] = ent_seed;
            detail::write_output(ent_in.output, rec.dump(2) + "\n");
            return 0;
        }

        if (dis_cmd->parsed()) {
            const Fingerprint f = dis_in.load();
            const DistinctConfig cfg{dis_k, dis_n == 0 ? f.n : dis_n, dis_alpha, dis_beta};
            json rec = distinct_record(estimate_distinct(f, cfg), cfg);
            rec["config"] = dis_in.config();
            rec["config"]["k"] = cfg.k;
            rec["config"]["n-expected"] = cfg.n;
            rec["config"]["alpha"] = cfg.alpha;
            rec["config"]["beta"] = cfg.beta;
            detail::write_output(dis_in.output, rec.dump(2) + "\n");
            return 0;
        }

        // simulate
        static const std::set<std::string> kKnown{
            "plugin",    "chebyshev",    "chebyshev-adaptive", "good-turing",
            "chao1",     "good-toulmin", "efron-thisted",      "distinct",
            "empirical", "miller-madow", "entropy-poly",       "entropy-poly-adaptive"};
        ExperimentSpec spec;
        spec.family = parse_family(sim_family);
        spec.k = sim_k;
        spec.zipf_alpha = sim_alpha;
        spec.sample_sizes = sim_n;
        spec.trials = sim_trials;
        spec.mode = parse_mode(sim_mode);
        spec.seed = sim_seed;
        spec.threads = sim_threads;
        for (const auto& name : detail::split_csv(sim_estimators)) {
            if (!kKnown.count(name)) {
                std::cerr << "simulate: unknown estimator '" << name << "'\n";
                return 2;
            }
            EstimatorSpec es;
            es.kind = name;
            es.c0 = sim_c0;
            es.c1 = sim_c1;
            es.ec0 = sim_ec0;
            es.ec1 = sim_ec1;
            es.ec2 = sim_ec2;
            es.t = sim_t;
            es.J = sim_J;
            es.eps = sim_eps;
            es.alpha = sim_dalpha;
            es.beta = sim_dbeta;
            es.split = sim_split;
            spec.estimators.push_back(std::move(es));
        }
        if (spec.estimators.empty()) {
            std::cerr << "simulate: --estimators is empty\n";
            return 2;
        }
        const ExperimentResult result = run_trials(spec);
        if (sim_out_format == "json")
            detail::write_output(sim_output, experiment_record(spec, result).dump(2) + "\n");
        else
            detail::write_output(sim_output, to_csv(result));
        return 0;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(int argc, char** argv) {
    return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace unseen::cli
