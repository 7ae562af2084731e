#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chaoslyap/core.hpp"
#include "chaoslyap/fitter.hpp"
#include "chaoslyap/generators.hpp"
#include "chaoslyap/lyapunov.hpp"
#include "chaoslyap/neuralnet.hpp"
#include "chaoslyap/selection.hpp"

namespace chaoslyap {

using json = nlohmann::ordered_json;

inline json to_json(const Triplet &t) { return {{"L", t.L}, {"m", t.m}, {"q", t.q}}; }

inline Triplet triplet_from_json(const json &j) {
    return {j.at("L").get<int>(), j.at("m").get<int>(), j.at("q").get<int>()};
}

inline json to_json(const NetworkParams &p) {
    json weights = json::array();
    for (int j = 0; j < p.q(); ++j) {
        json row = json::array();
        for (int i = 0; i < p.m(); ++i) row.push_back(p.input_weights(j, i));
        weights.push_back(std::move(row));
    }
    return {{"m", p.m()},
            {"q", p.q()},
            {"input_weights", std::move(weights)},
            {"hidden_biases", std::vector<double>(p.hidden_biases.begin(), p.hidden_biases.end())},
            {"output_weights", std::vector<double>(p.output_weights.begin(), p.output_weights.end())},
            {"output_bias", p.output_bias}};
}

inline NetworkParams network_from_json(const json &j) {
    const int m = j.at("m").get<int>();
    const int q = j.at("q").get<int>();
    NetworkParams p(m, q);
    const auto &w = j.at("input_weights");
    if (w.size() != static_cast<std::size_t>(q)) throw Error("input_weights must have q rows");
    for (int r = 0; r < q; ++r) {
        if (w[r].size() != static_cast<std::size_t>(m)) throw Error("input_weights rows must have m entries");
        for (int i = 0; i < m; ++i) p.input_weights(r, i) = w[r][i].get<double>();
    }
    const auto hb = j.at("hidden_biases").get<std::vector<double>>();
    const auto ow = j.at("output_weights").get<std::vector<double>>();
    if (hb.size() != static_cast<std::size_t>(q) || ow.size() != static_cast<std::size_t>(q))
        throw Error("bias and output weight vectors must have q entries");
    for (int r = 0; r < q; ++r) {
        p.hidden_biases(r) = hb[r];
        p.output_weights(r) = ow[r];
    }
    p.output_bias = j.at("output_bias").get<double>();
    p.validate();
    return p;
}

inline json to_json(const ChaosTestResult &r, bool include_rates) {
    json j = {{"signal_id", r.signal_id},
              {"label", r.label},
              {"lambda_hat", r.lambda_hat},
              {"p_value", r.p_value},
              {"se", r.se},
              {"reject", r.reject},
              {"triplet", to_json(r.triplet)},
              {"sse", r.sse},
              {"M", r.M},
              {"diagnostics", r.diagnostics}};
    if (include_rates) j["local_rates"] = r.local_rates;
    return j;
}

inline ChaosTestResult chaos_result_from_json(const json &j) {
    ChaosTestResult r;
    r.signal_id = j.at("signal_id").get<std::string>();
    r.label = j.value("label", std::string{});
    r.lambda_hat = j.at("lambda_hat").get<double>();
    r.p_value = j.at("p_value").get<double>();
    if (!(r.p_value >= 0.0 && r.p_value <= 1.0)) throw Error("p_value of '" + r.signal_id + "' is outside [0, 1]");
    r.se = j.value("se", 0.0);
    r.reject = j.value("reject", false);
    if (j.contains("triplet")) r.triplet = triplet_from_json(j.at("triplet"));
    r.sse = j.value("sse", 0.0);
    r.M = j.value("M", 0);
    if (j.contains("local_rates")) r.local_rates = j.at("local_rates").get<std::vector<double>>();
    if (j.contains("diagnostics")) r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return r;
}

inline json to_json(const RankedSelection &sel) {
    json entries = json::array();
    for (const auto &e : sel.entries)
        entries.push_back({{"rank", e.rank},
                           {"signal_id", e.signal_id},
                           {"label", e.label},
                           {"lambda_hat", e.lambda_hat},
                           {"p_value", e.p_value},
                           {"score", e.score}});
    json filtered = json::array();
    for (const auto &[id, reason] : sel.filtered_out) filtered.push_back({{"signal_id", id}, {"reason", reason}});
    return {{"criterion", to_string(sel.criterion)}, {"entries", std::move(entries)}, {"filtered_out", std::move(filtered)}};
}

inline json to_json(const GeneratorSpec &spec) {
    json params = json::object();
    for (const auto &[k, v] : spec.parameters) params[k] = v;
    return {{"kind", to_string(spec.kind)},
            {"parameters", std::move(params)},
            {"n", spec.n},
            {"seed", spec.seed},
            {"noise_std", spec.noise_std},
            {"transient_skip", spec.transient_skip}};
}

inline json to_json(const FitSettings &f) {
    return {{"tol_g", f.tol_g}, {"tol_f", f.tol_f}, {"max_iterations", f.max_iterations}};
}

} // namespace chaoslyap
