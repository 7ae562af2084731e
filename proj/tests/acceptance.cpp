// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
//   acceptance          run all
//   acceptance 2 3 8    run a subset

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "chaoslyap/chaoslyap.hpp"
#include "oracles.hpp"
#include "table_fixtures.hpp"

using namespace chaoslyap;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

GridSearchOptions pipeline_options() {
    GridSearchOptions opt;
    opt.bounds = {2, 4, 8};
    return opt;
}

Signal make(GeneratorKind kind, int n, std::map<std::string, double> params, std::uint64_t seed = 0,
            double noise = 0.0, int skip = 0) {
    GeneratorSpec s;
    s.kind = kind;
    s.n = n;
    s.parameters = std::move(params);
    s.seed = seed;
    s.noise_std = noise;
    s.transient_skip = skip;
    return generate(s);
}

std::string describe(const ChaosTestResult &r) {
    return fmt("lambda=%.4f p=%.4f triplet=%s", r.lambda_hat, r.p_value, to_string(r.triplet).c_str());
}

Outcome criterion1() {
    const auto sel = rank_product(fixtures::selection_results());
    const auto &rows = fixtures::te_selection_order();
    if (sel.entries.size() != rows.size()) return {false, "wrong entry count"};
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (sel.entries[i].signal_id != rows[i].id) return {false, "order differs at rank " + std::to_string(i + 1)};
        worst = std::max(worst, std::abs(sel.entries[i].score - rows[i].product));
    }
    return {worst <= 1e-5, fmt("order matches; max |lambda*p - printed| = %.2e", worst)};
}

Outcome criterion2() {
    Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 4);
        const int M = 2 + static_cast<int>(rng.next_u64() % 14);
        std::vector<Eigen::MatrixXd> chain;
        for (int s = 0; s < M - 1; ++s) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) J(0, i) = rng.uniform(-1.5, 1.5);
            for (int i = 1; i < m; ++i) J(i, i - 1) = 1.0;
            chain.push_back(J);
        }
        const double direct = lyapunov_direct(chain);
        const double stab = lyapunov_stabilized(chain).lambda_hat;
        worst = std::max(worst, std::abs(stab - direct) / std::max(std::abs(direct), 1e-300));
    }
    return {worst < 1e-8, fmt("max relative error %.2e over 100 chains", worst)};
}

Outcome criterion3() {
    Rng rng(3);
    double worst_x = 0.0, worst_t = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 6);
        const int q = 1 + static_cast<int>(rng.next_u64() % 8);
        const auto p = oracles::random_network(rng, m, q, 1.0);
        Eigen::VectorXd x(m);
        for (int i = 0; i < m; ++i) x(i) = rng.normal();
        const Eigen::VectorXd gx = input_gradient(p, x), gt = parameter_gradient(p, x);
        worst_x = std::max(worst_x, (gx - oracles::fd_input_gradient(p, x, 1e-5)).norm() / std::max(gx.norm(), 1e-12));
        worst_t =
            std::max(worst_t, (gt - oracles::fd_parameter_gradient(p, x, 1e-5)).norm() / std::max(gt.norm(), 1e-12));
    }
    return {worst_x < 1e-6 && worst_t < 1e-6, fmt("input %.2e, parameter %.2e", worst_x, worst_t)};
}

Outcome criterion4() {
    const auto r = grid_search(make(GeneratorKind::logistic, 2000, {{"r", 4.0}, {"x0", 0.3}}), pipeline_options()).best;
    const bool ok = r.lambda_hat >= 0.55 && r.lambda_hat <= 0.80 && r.p_value >= 0.95;
    return {ok, describe(r) + fmt(" (target [0.55, 0.80], oracle %.4f)", std::numbers::ln2)};
}

Outcome criterion5() {
    const auto ar = grid_search(make(GeneratorKind::ar1, 2000, {{"phi", 0.5}, {"innovation_std", 1.0}}, 7),
                                pipeline_options())
                        .best;
    // Contraction x <- 0.5 x started at 1, dithered by innovations of size 1e-6.
    const auto contraction =
        grid_search(make(GeneratorKind::ar1, 2000, {{"phi", 0.5}, {"x0", 1.0}, {"innovation_std", 1e-6}}, 11),
                    pipeline_options())
            .best;
    const bool ok = ar.lambda_hat < 0.0 && ar.p_value <= 0.5 &&
                    std::abs(contraction.lambda_hat - std::log(0.5)) <= 0.15;
    return {ok, "ar1: " + describe(ar) + "; contraction: " + describe(contraction)};
}

Outcome criterion6() {
    const auto clean = make(GeneratorKind::logistic, 2000, {{"r", 4.0}, {"x0", 0.3}});
    const double sd = standardize(clean).std;
    const auto r = grid_search(make(GeneratorKind::logistic, 2000, {{"r", 4.0}, {"x0", 0.3}}, 5, 0.05 * sd),
                               pipeline_options())
                       .best;
    return {r.lambda_hat > 0.0 && r.p_value >= 0.9, describe(r) + fmt(" (noise std %.4f)", 0.05 * sd)};
}

Outcome criterion7() {
    const LorenzParams p;
    const auto a = lorenz_trajectory(p, {1.0, 1.0, 1.0}, 2000, 0.01);
    const auto b = lorenz_trajectory(p, {1.0 + 1e-9, 1.0, 1.0}, 2000, 0.01);
    int first = -1;
    for (std::size_t i = 0; i < a.size() && first < 0; ++i) {
        const double d = std::sqrt(std::pow(a[i][0] - b[i][0], 2) + std::pow(a[i][1] - b[i][1], 2) +
                                   std::pow(a[i][2] - b[i][2], 2));
        if (d > 1.0) first = static_cast<int>(i);
    }
    const auto r = grid_search(make(GeneratorKind::lorenz, 2000, {}, 0, 0.0, 200), pipeline_options()).best;
    return {first >= 0 && r.lambda_hat > 0.0,
            fmt("separation > 1 at step %d; ", first) + describe(r)};
}

Outcome criterion8() {
    Rng rng(8);
    std::vector<double> rates(500);
    double prev = 0.0;
    for (double &v : rates) v = prev = 0.4 * prev + rng.normal();
    const double p0 = hypothesis_test(0.0, rates, 0.05).p_value;
    const double se = hac_standard_error(rates);
    const double p5 = hypothesis_test(-1.6449 * se, rates, 0.05).p_value;
    bool monotone = true;
    double last = -1.0;
    for (int i = -400; i <= 400; ++i) {
        const double p = hypothesis_test(i * se / 100.0, rates, 0.05).p_value;
        monotone = monotone && p >= last;
        last = p;
    }
    return {p0 == 0.5 && std::abs(p5 - 0.05) <= 1e-3 && monotone,
            fmt("p(0)=%.17g p(-1.6449 se)=%.6f monotone=%s", p0, p5, monotone ? "yes" : "no")};
}

Outcome criterion9() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "chaoslyap_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "in.csv");
        write_csv(f, {make(GeneratorKind::henon, 400, {}).with_label(""),
                      Signal("noise", make(GeneratorKind::iid_noise, 400, {}, 3).samples())});
    }
    RunConfig config;
    config.bounds = {2, 2, 3};
    config.verbose = true;
    std::ostringstream out, err;
    const int c1 = cmd_analyze((dir / "in.csv").string(), (dir / "a.json").string(), config, out, err);
    const int c2 = cmd_analyze((dir / "in.csv").string(), (dir / "b.json").string(), config, out, err);
    auto load = [&](const char *name) {
        std::ifstream f(dir / name);
        auto j = json::parse(f);
        j.erase("created");
        return j.dump();
    };
    const bool same = load("a.json") == load("b.json");
    fs::remove_all(dir);
    return {c1 == exit_ok && c2 == exit_ok && same, same ? "results JSON identical" : "results JSON differs"};
}

} // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                           criterion4, criterion5, criterion6,
                                                           criterion7, criterion8, criterion9};
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!wanted.empty() && !wanted.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
