// chaoslyap: chaos test and controlled-variable ranking for CSV time series.
//
//   chaoslyap analyze data.csv --output results.json
//   chaoslyap rank results.json --criterion product --top-n 12
//   chaoslyap generate logistic --r 4 --x0 0.3 --n 2000 --output logistic.csv

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaoslyap/app.hpp"

using namespace chaoslyap;

namespace {

struct AnalyzeFlags {
    std::string input;
    std::string output = "results.json";
    std::string config_file;
    std::optional<int> L_max, m_max, q_max, n_starts, max_iterations;
    std::optional<double> alpha, tol_g, tol_f;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> criterion;
    std::optional<std::size_t> top_n;
    std::optional<unsigned> jobs;
    bool verbose = false;
    std::vector<std::string> columns;
    std::vector<std::string> labels;
};

RunConfig resolve(const AnalyzeFlags &f) {
    RunConfig c = f.config_file.empty() ? RunConfig{} : load_config_file(f.config_file);
    if (f.L_max) c.bounds.L_max = *f.L_max;
    if (f.m_max) c.bounds.m_max = *f.m_max;
    if (f.q_max) c.bounds.q_max = *f.q_max;
    if (f.n_starts) c.n_starts = *f.n_starts;
    if (f.max_iterations) c.fit.max_iterations = *f.max_iterations;
    if (f.alpha) c.alpha = *f.alpha;
    if (f.tol_g) c.fit.tol_g = *f.tol_g;
    if (f.tol_f) c.fit.tol_f = *f.tol_f;
    if (f.seed) c.base_seed = *f.seed;
    if (f.criterion) c.criterion = parse_criterion(*f.criterion);
    if (f.top_n) c.top_n = *f.top_n;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.verbose) c.verbose = true;
    if (!f.columns.empty()) c.columns = f.columns;
    for (const auto &kv : f.labels) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw Error("label '" + kv + "' must look like id=ABBREV");
        c.labels[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Chaos detection and controlled-variable ranking for time series"};
    app.require_subcommand(1);

    AnalyzeFlags af;
    auto *analyze = app.add_subcommand("analyze", "Estimate the largest Lyapunov exponent and chaos p-value per column");
    analyze->add_option("input", af.input, "Input CSV (header row, one column per signal)")->required();
    analyze->add_option("-o,--output", af.output, "Results JSON path")->capture_default_str();
    analyze->add_option("--config", af.config_file, "JSON config; flags override its values");
    analyze->add_option("--L-max", af.L_max, "Largest delay L (default 3)");
    analyze->add_option("--m-max", af.m_max, "Largest embedding dimension m (default 6)");
    analyze->add_option("--q-max", af.q_max, "Largest hidden-unit count q (default 8)");
    analyze->add_option("--alpha", af.alpha, "Significance level (default 0.05)");
    analyze->add_option("--n-starts", af.n_starts, "Random restarts per fit (default 5)");
    analyze->add_option("--seed", af.seed, "Base seed (default 42)");
    analyze->add_option("--tol-g", af.tol_g, "Gradient tolerance (default 1e-6)");
    analyze->add_option("--tol-f", af.tol_f, "Relative SSE decrease tolerance (default 1e-10)");
    analyze->add_option("--max-iterations", af.max_iterations, "Iteration cap per start (default 500)");
    analyze->add_option("--criterion", af.criterion, "Ranking criterion echoed in the config");
    analyze->add_option("--top-n", af.top_n, "Ranking length echoed in the config");
    analyze->add_option("--jobs", af.jobs, "Signals analyzed in parallel (default 1)");
    analyze->add_option("--columns", af.columns, "Columns to analyze (default all)")->delimiter(',');
    analyze->add_option("--label", af.labels, "Abbreviation for a column, id=ABBREV (repeatable)");
    analyze->add_flag("-v,--verbose", af.verbose, "Include local rates in the results JSON");

    std::string results_path, criterion = "product", selection_out;
    std::optional<std::size_t> rank_top_n;
    auto *rank = app.add_subcommand("rank", "Rank candidate controlled variables from a results file");
    rank->add_option("results", results_path, "Results JSON written by analyze")->required();
    rank->add_option("--criterion", criterion, "product | ascending_p | combined")->capture_default_str();
    rank->add_option("--top-n", rank_top_n, "Keep only the first N entries");
    rank->add_option("-o,--output", selection_out, "Selection JSON path");

    std::string kind, gen_out;
    GeneratorSpec spec;
    std::map<std::string, std::optional<double>> gen_params;
    auto *gen = app.add_subcommand("generate", "Write a reference signal as CSV");
    gen->add_option("kind", kind, "logistic | henon | lorenz | ar1 | sine | iid_noise")->required();
    gen->add_option("--n", spec.n, "Sample count")->capture_default_str();
    gen->add_option("--seed", spec.seed, "Seed")->capture_default_str();
    gen->add_option("--noise-std", spec.noise_std, "Observation noise standard deviation")->capture_default_str();
    gen->add_option("--transient-skip", spec.transient_skip, "Leading samples to discard")->capture_default_str();
    gen->add_option("-o,--output", gen_out, "CSV path (default <kind>.csv)");
    for (const char *name : {"r", "x0", "a", "b", "y0", "z0", "sigma", "rho", "beta", "h", "stride", "phi",
                             "innovation_std", "amplitude", "period", "phase", "std"}) {
        // "--h" would collide with the help flag.
        std::string flag = std::string("--") + (std::string(name) == "h" ? "step" : name);
        for (auto &ch : flag)
            if (ch == '_') ch = '-';
        gen->add_option(flag, gen_params[name], std::string("Generator parameter ") + name);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_usage;
    }

    if (*analyze) {
        RunConfig config;
        try {
            config = resolve(af);
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_usage;
        }
        return cmd_analyze(af.input, af.output, config, std::cout, std::cerr);
    }
    if (*rank) return cmd_rank(results_path, criterion, rank_top_n, selection_out, std::cout, std::cerr);

    try {
        spec.kind = parse_generator_kind(kind);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    for (const auto &[name, value] : gen_params)
        if (value) spec.parameters[name] = *value;
    if (gen_out.empty()) gen_out = kind + ".csv";
    return cmd_generate(spec, gen_out, std::cerr);
}
