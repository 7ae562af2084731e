#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chaoslyap/core.hpp"
#include "chaoslyap/neuralnet.hpp"
#include "chaoslyap/signal.hpp"

namespace chaoslyap {

// Floor applied to a log growth factor when a Jacobian step annihilates the tracked direction.
inline const double kLogFloor = std::log(1e-300);

struct ChaosTestResult {
    std::string signal_id;
    std::string label;
    double lambda_hat = 0.0; // per sample step, natural log
    double p_value = 0.0;
    double se = 0.0;
    bool reject = false; // chaos rejected at the configured alpha
    Triplet triplet;
    double sse = 0.0;
    int M = 0;
    std::vector<double> local_rates; // length M - 1, mean equals lambda_hat
    std::vector<std::string> diagnostics;
};

struct LyapunovEstimate {
    double lambda_hat = 0.0;
    std::vector<double> local_rates;
    int M = 0;
    int clamped_steps = 0; // steps whose growth factor hit kLogFloor
};

struct HypothesisTest {
    double p_value = 0.0;
    double se = 0.0;
    bool reject = false;
    bool degenerate_variance = false;
};

// Largest M with M^3 <= n^2, i.e. floor(n^(2/3)) without floating-point edge errors.
inline int evaluation_count(std::int64_t usable) {
    if (usable < 1) return 0;
    const std::int64_t sq = usable * usable;
    auto m = static_cast<std::int64_t>(std::cbrt(static_cast<double>(sq)));
    while (m > 0 && m * m * m > sq) --m;
    while ((m + 1) * (m + 1) * (m + 1) <= sq) ++m;
    return static_cast<int>(m);
}

// First row holds df/dx_{t-L} ... df/dx_{t-mL}; rows 2..m are the shifted identity.
inline Eigen::MatrixXd companion_jacobian(const NetworkParams &params, const Eigen::Ref<const Eigen::VectorXd> &lags) {
    const Eigen::VectorXd grad = input_gradient(params, lags);
    const Eigen::Index m = grad.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    J.row(0) = grad.transpose();
    for (Eigen::Index i = 1; i < m; ++i) J(i, i - 1) = 1.0;
    return J;
}

namespace detail {

inline void check_chain(const std::vector<Eigen::MatrixXd> &jacobians) {
    if (jacobians.empty()) throw Error("Jacobian chain needs at least one matrix (M >= 2)");
    const Eigen::Index m = jacobians.front().rows();
    for (const auto &J : jacobians)
        if (J.rows() != m || J.cols() != m) throw Error("Jacobian chain matrices must all be m x m");
}

} // namespace detail

// ln(v1) / (2M) where v1 is the largest eigenvalue of T^T T and
// T = J_{M-1} ... J_1 (jacobians[0] is J_1). Forms the product literally,
// so it overflows for long or strongly expanding chains.
inline double lyapunov_direct(const std::vector<Eigen::MatrixXd> &jacobians) {
    detail::check_chain(jacobians);
    const auto M = static_cast<double>(jacobians.size() + 1);
    Eigen::MatrixXd T = Eigen::MatrixXd::Identity(jacobians.front().rows(), jacobians.front().rows());
    for (const auto &J : jacobians) T = J * T;
    if (!T.allFinite()) throw Error("Jacobian product is not finite; use stabilized path");
    const Eigen::MatrixXd gram = T.transpose() * T;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double v1 = eig.eigenvalues().maxCoeff();
    if (!(v1 > 0.0) || !std::isfinite(v1)) throw Error("Jacobian product is degenerate; use stabilized path");
    return std::log(v1) / (2.0 * M);
}

// Overflow-free equivalent of lyapunov_direct.
//
// Pass 1 re-orthonormalizes the chain with a QR factorization after every
// Jacobian and keeps the product of the triangular factors with a running log
// scale; its dominant right singular vector is the direction T stretches most.
// Pass 2 propagates that direction through the chain; the growth factor at each
// step is the leading R diagonal of a QR pass started from it, and their logs
// sum to ln sigma_1(T) = ln(v1) / 2.
//
// local_rates[k] = ln r_k * (M-1)/M, so mean(local_rates) = ln(v1) / (2M).
inline LyapunovEstimate lyapunov_stabilized(const std::vector<Eigen::MatrixXd> &jacobians) {
    detail::check_chain(jacobians);
    const Eigen::Index m = jacobians.front().rows();
    const int steps = static_cast<int>(jacobians.size());
    const int M = steps + 1;

    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd R_acc = Eigen::MatrixXd::Identity(m, m);
    bool annihilated = false;
    for (const auto &J : jacobians) {
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(J * Q);
        Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
        Q = qr.householderQ();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (R(i, i) < 0.0) {
                R.row(i) *= -1.0;
                Q.col(i) *= -1.0;
            }
        }
        R_acc = R * R_acc;
        const double scale = R_acc.cwiseAbs().maxCoeff();
        if (!(scale > 0.0)) {
            annihilated = true;
            break;
        }
        R_acc /= scale;
    }

    Eigen::VectorXd direction = Eigen::VectorXd::Unit(m, 0);
    if (!annihilated) {
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(R_acc, Eigen::ComputeFullV);
        direction = svd.matrixV().col(0);
    }

    LyapunovEstimate out;
    out.M = M;
    out.local_rates.reserve(static_cast<std::size_t>(steps));
    const double weight = static_cast<double>(M - 1) / static_cast<double>(M);
    double total = 0.0;
    for (const auto &J : jacobians) {
        Eigen::VectorXd next = J * direction;
        const double growth = next.norm();
        double rate = 0.0;
        if (growth > 0.0 && std::isfinite(growth)) {
            rate = std::log(growth);
            direction = next / growth;
        }
        if (!(growth > 0.0) || rate < kLogFloor) {
            rate = kLogFloor;
            ++out.clamped_steps;
        }
        out.local_rates.push_back(rate * weight);
        total += rate * weight;
    }
    out.lambda_hat = total / static_cast<double>(steps);
    return out;
}

// Jacobian chain of a fitted model along the tail of a (standardized) signal.
// Evaluation instants are spaced L samples apart and end at the last sample, so
// each companion Jacobian maps the delay state at t - L to the state at t.
inline std::vector<Eigen::MatrixXd> model_jacobians(const NetworkParams &params, const Signal &signal, int L, int m,
                                                    int M) {
    if (params.m() != m) throw Error("network input dimension does not match m");
    if (M < 2) throw Error("at least two evaluation points are required");
    const auto n = static_cast<std::int64_t>(signal.size());
    const std::int64_t span = static_cast<std::int64_t>(L) * m;
    const std::int64_t first = n - 1 - static_cast<std::int64_t>(M - 2) * L;
    if (first < span) throw Error("signal too short for " + std::to_string(M) + " evaluation points");

    std::vector<Eigen::MatrixXd> chain;
    chain.reserve(static_cast<std::size_t>(M - 1));
    Eigen::VectorXd lags(m);
    for (std::int64_t t = first; t < n; t += L) {
        for (int j = 0; j < m; ++j) lags(j) = signal[static_cast<std::size_t>(t - static_cast<std::int64_t>(j + 1) * L)];
        chain.push_back(companion_jacobian(params, lags));
    }
    return chain;
}

// Largest exponent of a fitted model, in per-sample units (chain rates divided by L).
inline LyapunovEstimate lyapunov_stabilized(const NetworkParams &params, const Signal &signal, int L, int m, int M) {
    LyapunovEstimate est = lyapunov_stabilized(model_jacobians(params, signal, L, m, M));
    if (L > 1) {
        for (double &r : est.local_rates) r /= L;
        est.lambda_hat /= L;
    }
    return est;
}

// M = floor((T - mL)^(2/3)).
inline LyapunovEstimate estimate_lyapunov(const NetworkParams &params, const Signal &signal, int L, int m) {
    const auto usable = static_cast<std::int64_t>(signal.size()) - static_cast<std::int64_t>(L) * m;
    const int M = evaluation_count(usable);
    if (M < 2) throw Error("signal too short for the Lyapunov evaluation");
    return lyapunov_stabilized(params, signal, L, m, M);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Newey-West standard error of the mean with Bartlett weights and bandwidth floor(K^(1/3)).
inline double hac_standard_error(const std::vector<double> &x) {
    const auto K = static_cast<std::int64_t>(x.size());
    if (K < 2) throw Error("standard error needs at least two observations");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(K);

    std::int64_t bandwidth = static_cast<std::int64_t>(std::cbrt(static_cast<double>(K)));
    while (bandwidth > 0 && bandwidth * bandwidth * bandwidth > K) --bandwidth;
    while ((bandwidth + 1) * (bandwidth + 1) * (bandwidth + 1) <= K) ++bandwidth;

    auto autocov = [&](std::int64_t lag) {
        double s = 0.0;
        for (std::int64_t t = lag; t < K; ++t) s += (x[t] - mean) * (x[t - lag] - mean);
        return s / static_cast<double>(K);
    };
    double variance = autocov(0);
    for (std::int64_t j = 1; j <= bandwidth; ++j)
        variance += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(bandwidth + 1)) * autocov(j);
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    // Constant input leaves a rounding-level variance; treat it as zero.
    if (!(variance > 0.0) || std::sqrt(variance) <= 1e-13 * scale) return 0.0;
    return std::sqrt(variance / static_cast<double>(K));
}

// One-tailed test of H0: lambda >= 0 (chaos). p = Phi(lambda_hat / se); small p rejects chaos.
inline HypothesisTest hypothesis_test(double lambda_hat, const std::vector<double> &local_rates, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (local_rates.size() < 2) throw Error("hypothesis test needs at least two local rates");
    HypothesisTest out;
    out.se = hac_standard_error(local_rates);
    if (out.se > 0.0) {
        out.p_value = normal_cdf(lambda_hat / out.se);
    } else {
        out.degenerate_variance = true;
        out.p_value = lambda_hat >= 0.0 ? 1.0 : 0.0;
    }
    out.reject = out.p_value < alpha;
    return out;
}

} // namespace chaoslyap
