#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chaoslyap/fitter.hpp"
#include "chaoslyap/generators.hpp"
#include "chaoslyap/io.hpp"
#include "chaoslyap/parallel.hpp"
#include "chaoslyap/selection.hpp"
#include "chaoslyap/signal.hpp"

namespace chaoslyap {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_all_failed = 2 };

struct RunConfig {
    GridBounds bounds;
    double alpha = 0.05;
    int n_starts = 5;
    std::uint64_t base_seed = 42;
    FitSettings fit;
    RankCriterion criterion = RankCriterion::product;
    std::optional<std::size_t> top_n;
    bool verbose = false;
    unsigned jobs = 1;
    std::vector<std::string> columns;
    std::map<std::string, std::string> labels;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
        if (bounds.L_max < 1 || bounds.m_max < 1 || bounds.q_max < 1) throw Error("bounds must be at least 1");
        if (n_starts < 1) throw Error("n_starts must be at least 1");
        if (!(fit.tol_g >= 0.0) || !(fit.tol_f >= 0.0)) throw Error("fit tolerances must be nonnegative");
        if (fit.max_iterations < 1) throw Error("max_iterations must be at least 1");
        if (jobs < 1) throw Error("jobs must be at least 1");
    }
};

inline json to_json(const RunConfig &c) {
    json labels = json::object();
    for (const auto &[k, v] : c.labels) labels[k] = v;
    return {{"L_max", c.bounds.L_max},
            {"m_max", c.bounds.m_max},
            {"q_max", c.bounds.q_max},
            {"alpha", c.alpha},
            {"n_starts", c.n_starts},
            {"base_seed", c.base_seed},
            {"tol_g", c.fit.tol_g},
            {"tol_f", c.fit.tol_f},
            {"max_iterations", c.fit.max_iterations},
            {"criterion", to_string(c.criterion)},
            {"top_n", c.top_n ? json(*c.top_n) : json(nullptr)},
            {"verbose", c.verbose},
            {"columns", c.columns},
            {"labels", std::move(labels)}};
}

// Applies every key present in `j` on top of `c`; unknown keys are rejected.
inline void apply_config_json(RunConfig &c, const json &j) {
    if (!j.is_object()) throw Error("config file must hold a JSON object");
    for (const auto &[key, v] : j.items()) {
        if (key == "L_max") c.bounds.L_max = v.get<int>();
        else if (key == "m_max") c.bounds.m_max = v.get<int>();
        else if (key == "q_max") c.bounds.q_max = v.get<int>();
        else if (key == "alpha") c.alpha = v.get<double>();
        else if (key == "n_starts") c.n_starts = v.get<int>();
        else if (key == "base_seed") c.base_seed = v.get<std::uint64_t>();
        else if (key == "tol_g") c.fit.tol_g = v.get<double>();
        else if (key == "tol_f") c.fit.tol_f = v.get<double>();
        else if (key == "max_iterations") c.fit.max_iterations = v.get<int>();
        else if (key == "criterion") c.criterion = parse_criterion(v.get<std::string>());
        else if (key == "top_n") c.top_n = v.is_null() ? std::nullopt : std::optional<std::size_t>(v.get<std::size_t>());
        else if (key == "verbose") c.verbose = v.get<bool>();
        else if (key == "jobs") c.jobs = v.get<unsigned>();
        else if (key == "columns") c.columns = v.get<std::vector<std::string>>();
        else if (key == "labels") c.labels = v.get<std::map<std::string, std::string>>();
        else throw Error("unknown config key '" + key + "'");
    }
}

inline RunConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    RunConfig c;
    apply_config_json(c, json::parse(in));
    return c;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct AnalyzeOutput {
    json document;   // {"created", "config", "results"}
    std::string table;
    int exit_code = exit_ok;
};

// Grid search and chaos test for every signal. Signal failures are recorded,
// not fatal; output order follows input column order.
inline AnalyzeOutput analyze_signals(const std::vector<Signal> &signals, const RunConfig &config,
                                     std::ostream *progress = nullptr) {
    config.validate();
    GridSearchOptions opt;
    opt.bounds = config.bounds;
    opt.n_starts = config.n_starts;
    opt.base_seed = config.base_seed;
    opt.fit = config.fit;
    opt.alpha = config.alpha;

    struct Outcome {
        std::optional<ChaosTestResult> result;
        std::string failure;
    };
    std::vector<Outcome> outcomes(signals.size());
    parallel_for(signals.size(), config.jobs, [&](std::size_t i) {
        const auto it = config.labels.find(signals[i].id());
        const Signal s = it == config.labels.end() ? signals[i] : signals[i].with_label(it->second);
        try {
            outcomes[i].result = grid_search(s, opt).best;
        } catch (const Error &e) {
            outcomes[i].failure = e.what();
        }
    });

    AnalyzeOutput out;
    json results = json::array();
    std::vector<ChaosTestResult> ok;
    for (std::size_t i = 0; i < signals.size(); ++i) {
        if (outcomes[i].result) {
            json j = to_json(*outcomes[i].result, config.verbose);
            j["status"] = "ok";
            results.push_back(std::move(j));
            ok.push_back(*outcomes[i].result);
            if (progress) *progress << "analyzed " << signals[i].id() << "\n";
        } else {
            results.push_back({{"signal_id", signals[i].id()}, {"status", "failed"}, {"reason", outcomes[i].failure}});
            if (progress) *progress << "failed " << signals[i].id() << ": " << outcomes[i].failure << "\n";
        }
    }
    out.document = {{"created", utc_timestamp()}, {"config", to_json(config)}, {"results", std::move(results)}};
    out.table = chaos_table(ok);
    if (ok.empty() && !signals.empty()) out.exit_code = exit_all_failed;
    return out;
}

inline int cmd_analyze(const std::string &input_csv, const std::string &output_json, const RunConfig &config,
                       std::ostream &out, std::ostream &err) {
    std::vector<Signal> signals;
    try {
        config.validate();
        signals = load_csv(input_csv, config.columns);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    const AnalyzeOutput result = analyze_signals(signals, config, &err);
    if (!output_json.empty()) {
        std::ofstream f(output_json);
        if (!f) {
            err << "error: cannot write '" << output_json << "'\n";
            return exit_usage;
        }
        f << result.document.dump(2) << "\n";
    }
    out << result.table;
    if (result.exit_code == exit_all_failed) err << "error: every signal failed\n";
    return result.exit_code;
}

// Successful entries of a results document (array or {"results": [...]}).
inline std::vector<ChaosTestResult> results_from_json(const json &doc) {
    const json *arr = &doc;
    if (doc.is_object()) {
        if (!doc.contains("results")) throw Error("results file has no 'results' array");
        arr = &doc.at("results");
    }
    if (!arr->is_array()) throw Error("results must be a JSON array");
    std::vector<ChaosTestResult> out;
    for (const auto &item : *arr) {
        if (!item.is_object()) throw Error("each result must be a JSON object");
        if (item.value("status", std::string("ok")) != "ok") continue;
        out.push_back(chaos_result_from_json(item));
    }
    return out;
}

inline int cmd_rank(const std::string &results_path, const std::string &criterion_name,
                    std::optional<std::size_t> top_n, const std::string &output_json, std::ostream &out,
                    std::ostream &err) {
    RankedSelection sel;
    try {
        const RankCriterion criterion = parse_criterion(criterion_name);
        std::ifstream in(results_path);
        if (!in) throw Error("cannot open results file '" + results_path + "'");
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception &e) {
            throw Error(std::string("malformed results file: ") + e.what());
        }
        std::vector<ChaosTestResult> results;
        try {
            results = results_from_json(doc);
        } catch (const json::exception &e) {
            throw Error(std::string("malformed results file: ") + e.what());
        }
        if (results.empty()) {
            err << "warning: no results to rank\n";
            sel.criterion = criterion;
        } else {
            sel = rank(results, criterion, top_n);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    if (!output_json.empty()) {
        std::ofstream f(output_json);
        if (!f) {
            err << "error: cannot write '" << output_json << "'\n";
            return exit_usage;
        }
        f << to_json(sel).dump(2) << "\n";
    }
    out << selection_table(sel);
    return exit_ok;
}

// Writes the CSV and a "<output>.json" sidecar holding the spec.
inline int cmd_generate(const GeneratorSpec &spec, const std::string &output_csv, std::ostream &err) {
    try {
        const Signal s = generate(spec);
        std::ofstream f(output_csv);
        if (!f) throw Error("cannot write '" + output_csv + "'");
        write_csv(f, {s});
        std::ofstream side(output_csv + ".json");
        if (!side) throw Error("cannot write '" + output_csv + ".json'");
        side << to_json(spec).dump(2) << "\n";
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_ok;
}

} // namespace chaoslyap
