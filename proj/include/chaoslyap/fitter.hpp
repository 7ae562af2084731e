#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chaoslyap/core.hpp"
#include "chaoslyap/lyapunov.hpp"
#include "chaoslyap/neuralnet.hpp"
#include "chaoslyap/parallel.hpp"
#include "chaoslyap/random.hpp"
#include "chaoslyap/signal.hpp"

namespace chaoslyap {

struct FitSettings {
    double tol_g = 1e-6;  // infinity norm of J^T r
    double tol_f = 1e-10; // relative SSE decrease of an accepted step
    int max_iterations = 500;
};

struct FitResult {
    NetworkParams params;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

// Thrown when the optimizer produces a non-finite state; carries the last finite iterate.
class FitDiverged : public Error {
public:
    FitDiverged(const std::string &what, NetworkParams last) : Error(what), last_(std::move(last)) {}
    const NetworkParams &last_finite() const { return last_; }

private:
    NetworkParams last_;
};

struct GridBounds {
    int L_max = 3;
    int m_max = 6;
    int q_max = 8;
};

struct GridSearchOptions {
    GridBounds bounds;
    int n_starts = 5;
    std::uint64_t base_seed = 42;
    FitSettings fit;
    double alpha = 0.05;
    unsigned jobs = 1;
};

struct GridSearchResult {
    ChaosTestResult best;
    std::vector<ChaosTestResult> all; // feasible triplets in (L, m, q) lexicographic order
};

inline double sum_squared_error(const NetworkParams &params, const LaggedDataset &data) {
    return (data.targets - forward_rows(params, data.inputs)).squaredNorm();
}

namespace detail {

// Jacobian of the network output with respect to theta, one row per dataset row.
inline void output_jacobian(const NetworkParams &p, const Eigen::MatrixXd &X, const Eigen::MatrixXd &hidden,
                            Eigen::MatrixXd &jac) {
    const int m = p.m();
    const int q = p.q();
    const Eigen::Index rows = X.rows();
    jac.resize(rows, p.size());
    Eigen::Index k = 0;
    for (int j = 0; j < q; ++j) {
        const Eigen::ArrayXd slope = p.output_weights(j) * (1.0 - hidden.col(j).array().square());
        for (int i = 0; i < m; ++i) jac.col(k++) = (slope * X.col(i).array()).matrix();
        jac.col(m * q + j) = slope.matrix();
    }
    k = static_cast<Eigen::Index>(m) * q + q;
    jac.middleCols(k, q) = hidden;
    jac.col(k + q).setOnes();
}

// Random hidden layer in [-0.5, 0.5] / sqrt(m); output layer by linear least squares.
inline NetworkParams initial_params(const LaggedDataset &data, int q, std::uint64_t seed) {
    const int m = data.m;
    NetworkParams p(m, q);
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < m; ++i) p.input_weights(j, i) = rng.uniform(-0.5, 0.5) * scale;
    for (int j = 0; j < q; ++j) p.hidden_biases(j) = rng.uniform(-0.5, 0.5) * scale;

    Eigen::MatrixXd design(data.rows(), q + 1);
    Eigen::MatrixXd hidden = data.inputs * p.input_weights.transpose();
    hidden.rowwise() += p.hidden_biases.transpose();
    design.leftCols(q) = hidden.array().tanh();
    design.col(q).setOnes();
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(data.targets);
    if (coef.allFinite()) {
        p.output_weights = coef.head(q);
        p.output_bias = coef(q);
    }
    return p;
}

} // namespace detail

// Levenberg-Marquardt on S(theta) = sum (target - f(inputs))^2 with
// Marquardt diagonal scaling and Nielsen's damping update.
inline FitResult fit(const LaggedDataset &data, int q, std::uint64_t seed, const FitSettings &settings = {}) {
    if (data.rows() < 1) throw Error("cannot fit an empty dataset");
    if (q < 1) throw Error("q must be at least 1");

    const int m = data.m;
    NetworkParams params = detail::initial_params(data, q, seed);
    Eigen::VectorXd theta = params.flatten();
    const Eigen::Index n_par = theta.size();

    Eigen::MatrixXd hidden;
    Eigen::VectorXd residual = data.targets - forward_rows(params, data.inputs, &hidden);
    double sse = residual.squaredNorm();
    if (!std::isfinite(sse)) throw FitDiverged("initial SSE is not finite", params);

    FitResult result;
    result.seed = seed;

    Eigen::MatrixXd jac;
    Eigen::MatrixXd normal(n_par, n_par);
    Eigen::VectorXd gradient;
    Eigen::VectorXd scaling(n_par);
    double mu = -1.0;
    double nu = 2.0;
    bool rebuild = true;

    int iteration = 0;
    while (iteration < settings.max_iterations) {
        if (rebuild) {
            detail::output_jacobian(params, data.inputs, hidden, jac);
            normal.setZero();
            normal.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
            normal.triangularView<Eigen::StrictlyUpper>() = normal.transpose();
            gradient = jac.transpose() * residual;
            if (!normal.allFinite() || !gradient.allFinite())
                throw FitDiverged("non-finite Jacobian during fit", params);
            if (gradient.lpNorm<Eigen::Infinity>() <= settings.tol_g) {
                result.converged = true;
                break;
            }
            const double diag_max = normal.diagonal().maxCoeff();
            const double floor = std::max(diag_max * 1e-12, 1e-300);
            scaling = normal.diagonal().cwiseMax(floor);
            if (mu < 0.0) mu = 1e-3;
            rebuild = false;
        }

        ++iteration;
        Eigen::MatrixXd damped = normal;
        damped.diagonal() += mu * scaling;
        const Eigen::VectorXd step = damped.ldlt().solve(gradient);
        if (!step.allFinite()) throw FitDiverged("non-finite step during fit", params);

        const Eigen::VectorXd trial_theta = theta + step;
        const NetworkParams trial = NetworkParams::unflatten(trial_theta, m, q);
        Eigen::MatrixXd trial_hidden;
        const Eigen::VectorXd trial_residual = data.targets - forward_rows(trial, data.inputs, &trial_hidden);
        const double trial_sse = trial_residual.squaredNorm();

        const double predicted = step.dot(gradient) + mu * step.dot(scaling.cwiseProduct(step));
        const double actual = sse - trial_sse;
        if (std::isfinite(trial_sse) && actual > 0.0 && predicted > 0.0) {
            const double rho = actual / predicted;
            theta = trial_theta;
            params = trial;
            hidden = std::move(trial_hidden);
            residual = trial_residual;
            const double previous = sse;
            sse = trial_sse;
            rebuild = true;
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
            if (actual <= settings.tol_f * previous) {
                result.converged = true;
                break;
            }
        } else {
            mu *= nu;
            nu *= 2.0;
            // No representable step decreases S: the iterate is a numerical minimum.
            if (!std::isfinite(mu) || mu > 1e30) {
                result.converged = true;
                break;
            }
        }
    }

    result.params = std::move(params);
    result.sse = sse;
    result.iterations = iteration;
    return result;
}

inline std::uint64_t start_seed(std::uint64_t base_seed, int start) {
    return start == 0 ? base_seed : derive_seed(base_seed, static_cast<std::uint64_t>(start));
}

// Best of n_starts independent fits; start 0 uses base_seed itself.
inline FitResult multi_start_fit(const LaggedDataset &data, int q, int n_starts, std::uint64_t base_seed,
                                 const FitSettings &settings = {}) {
    if (n_starts < 1) throw Error("n_starts must be at least 1");
    std::optional<FitResult> best;
    for (int s = 0; s < n_starts; ++s) {
        try {
            FitResult r = fit(data, q, start_seed(base_seed, s), settings);
            if (!best || r.sse < best->sse) best = std::move(r);
        } catch (const FitDiverged &) {
        }
    }
    if (!best) throw Error("no admissible fit");
    return *best;
}

// Fits every feasible triplet in [1..L_max] x [1..m_max] x [1..q_max] to the
// standardized signal and reports the one with the largest exponent.
inline GridSearchResult grid_search(const Signal &signal, const GridSearchOptions &opt) {
    const auto &b = opt.bounds;
    if (b.L_max < 1 || b.m_max < 1 || b.q_max < 1) throw Error("grid bounds must be at least 1");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    const Standardized z = standardize(signal);
    const auto n = static_cast<std::int64_t>(z.signal.size());

    std::vector<Triplet> triplets;
    for (int L = 1; L <= b.L_max; ++L)
        for (int m = 1; m <= b.m_max; ++m) {
            const std::int64_t usable = n - static_cast<std::int64_t>(L) * m;
            const int M = evaluation_count(usable);
            if (usable < 1 || M < 2 || n - 1 - static_cast<std::int64_t>(M - 2) * L < static_cast<std::int64_t>(L) * m)
                continue;
            for (int q = 1; q <= b.q_max; ++q) triplets.push_back({L, m, q});
        }
    if (triplets.empty()) throw Error("signal too short");

    std::vector<std::optional<ChaosTestResult>> slots(triplets.size());
    parallel_for(triplets.size(), opt.jobs, [&](std::size_t i) {
        const Triplet t = triplets[i];
        const LaggedDataset data = build_lagged(z.signal, t.L, t.m);
        FitResult f;
        try {
            f = multi_start_fit(data, t.q, opt.n_starts, opt.base_seed, opt.fit);
        } catch (const Error &) {
            return;
        }
        const LyapunovEstimate est = estimate_lyapunov(f.params, z.signal, t.L, t.m);
        const HypothesisTest test = hypothesis_test(est.lambda_hat, est.local_rates, opt.alpha);

        ChaosTestResult r;
        r.signal_id = signal.id();
        r.label = signal.label();
        r.lambda_hat = est.lambda_hat;
        r.p_value = test.p_value;
        r.se = test.se;
        r.reject = test.reject;
        r.triplet = t;
        r.sse = f.sse;
        r.M = est.M;
        r.local_rates = est.local_rates;
        if (!f.converged) r.diagnostics.emplace_back("iteration cap reached");
        if (est.clamped_steps > 0)
            r.diagnostics.emplace_back("singular Jacobian chain: " + std::to_string(est.clamped_steps) +
                                       " step(s) clamped");
        if (test.degenerate_variance) r.diagnostics.emplace_back("degenerate variance");
        slots[i] = std::move(r);
    });

    GridSearchResult out;
    for (auto &s : slots)
        if (s) out.all.push_back(std::move(*s));
    if (out.all.empty()) throw Error("no admissible fit for any triplet");

    const ChaosTestResult *best = &out.all.front();
    for (const auto &r : out.all) {
        if (r.lambda_hat > best->lambda_hat || (r.lambda_hat == best->lambda_hat && tie_less(r.triplet, best->triplet)))
            best = &r;
    }
    out.best = *best;
    return out;
}

} // namespace chaoslyap
