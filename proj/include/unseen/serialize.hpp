#pragma once

#include <json.hpp>

#include <string>

#include "unseen/distinct.hpp"
#include "unseen/entropy.hpp"
#include "unseen/fingerprint.hpp"
#include "unseen/sim.hpp"
#include "unseen/support.hpp"

// JSON record builders for the CLI and for anyone embedding the library.

namespace unseen {

using json = nlohmann::ordered_json;

inline json fingerprint_record(const Fingerprint& f) {
    json phi = json::object();
    for (const auto& [j, c] : f.phi) phi[std::to_string(j)] = c;
    return json{{"n", f.n}, {"distinct", f.distinct()}, {"phi", std::move(phi)}};
}

// Canonical fingerprint file format, with the sample size declared up front.
inline std::string fingerprint_text(const Fingerprint& f) {
    std::string out = "# n = " + std::to_string(f.n) + "\n";
    for (const auto& [j, c] : f.phi)
        out += std::to_string(j) + " " + std::to_string(c) + "\n";
    return out;
}

inline json support_record(const std::string& estimator, const LinearEstimator& e,
                           const SupportEstimate& s, std::uint64_t n) {
    json rec{{"estimator", estimator}};
    if (e.meta.adaptive) {
        rec["eps"] = e.meta.eps;
    } else {
        rec["k"] = e.meta.k;
    }
    rec["n"] = n;
    rec["L"] = e.meta.L;
    rec["l"] = e.meta.l;
    rec["r"] = e.meta.r;
    rec["c0"] = e.meta.c0;
    rec["c1"] = e.meta.c1;
    rec["raw"] = s.raw;
    rec["estimate"] = s.value;
    rec["warnings"] = s.warnings;
    return rec;
}

inline json baseline_record(const std::string& estimator, std::uint64_t n, double raw,
                            std::uint64_t estimate) {
    return json{{"estimator", estimator}, {"n", n},        {"raw", raw},
                {"estimate", estimate},   {"warnings", json::array()}};
}

inline json distinct_record(const DistinctEstimate& d, const DistinctConfig& cfg) {
    return json{{"estimator", "distinct"},
                {"k", cfg.k},
                {"n", cfg.n},
                {"L", d.L},
                {"M", d.M},
                {"regime", to_string(d.regime)},
                {"residual", d.residual},
                {"raw", d.raw},
                {"estimate", d.value},
                {"warnings", json::array()}};
}

inline json entropy_record(const std::string& estimator, const EntropyConfig& cfg,
                           std::uint64_t n, double estimate) {
    json rec{{"estimator", estimator}, {"k_or_n", cfg.adaptive ? n : cfg.k}};
    if (estimator == "poly") {
        const EntropyEstimator e = build_entropy_estimator(cfg, n);
        rec["L"] = e.L;
        rec["beta"] = e.beta;
        rec["T"] = e.T;
        rec["split"] = cfg.split;
    }
    rec["estimate"] = estimate;
    return rec;
}

inline json experiment_spec_record(const ExperimentSpec& spec) {
    json est = json::array();
    for (const auto& e : spec.estimators) {
        json je{{"kind", e.kind}};
        if (e.k) je["k"] = *e.k;
        je["c0"] = e.c0;
        je["c1"] = e.c1;
        je["ec0"] = e.ec0;
        je["ec1"] = e.ec1;
        je["ec2"] = e.ec2;
        je["t"] = e.t;
        je["J"] = e.J;
        je["eps"] = e.eps;
        je["alpha"] = e.alpha;
        je["beta"] = e.beta;
        je["split"] = e.split;
        est.push_back(std::move(je));
    }
    return json{{"family", to_string(spec.family)},
                {"k", spec.k},
                {"zipf_alpha", spec.zipf_alpha},
                {"sample_sizes", spec.sample_sizes},
                {"trials", spec.trials},
                {"mode", to_string(spec.mode)},
                {"seed", spec.seed},
                {"threads", spec.threads},
                {"estimators", std::move(est)}};
}

// Mirror of the CSV table with the generating spec embedded. Wall times are
// deliberately left out so the record is a pure function of (spec, seed).
inline json experiment_record(const ExperimentSpec& spec, const ExperimentResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows)
        rows.push_back(json{{"n", r.n},
                            {"estimator", r.estimator},
                            {"trials", r.trials},
                            {"failures", r.failures},
                            {"rmse", r.rmse},
                            {"std", r.stddev},
                            {"mean_estimate", r.mean_estimate},
                            {"truth", r.truth}});
    return json{{"spec", experiment_spec_record(spec)}, {"rows", std::move(rows)}};
}

}  // namespace unseen
