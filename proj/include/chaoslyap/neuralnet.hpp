#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "chaoslyap/core.hpp"

namespace chaoslyap {

// Single-hidden-layer tanh network
//   f(x) = output_bias + sum_j output_weights[j] * tanh(hidden_biases[j] + input_weights.row(j) . x)
//
// Flattened parameter order (length q*m + 2q + 1):
//   input_weights row-major, hidden_biases, output_weights, output_bias.
struct NetworkParams {
    Eigen::MatrixXd input_weights;  // q x m
    Eigen::VectorXd hidden_biases;  // q
    Eigen::VectorXd output_weights; // q
    double output_bias = 0.0;

    NetworkParams() = default;

    NetworkParams(int m, int q)
        : input_weights(Eigen::MatrixXd::Zero(q, m)), hidden_biases(Eigen::VectorXd::Zero(q)),
          output_weights(Eigen::VectorXd::Zero(q)) {
        if (m < 1 || q < 1) throw Error("network needs m >= 1 and q >= 1");
    }

    int m() const { return static_cast<int>(input_weights.cols()); }
    int q() const { return static_cast<int>(input_weights.rows()); }
    Eigen::Index size() const { return static_cast<Eigen::Index>(q()) * m() + 2 * q() + 1; }

    void validate() const {
        if (m() < 1 || q() < 1) throw Error("network needs m >= 1 and q >= 1");
        if (hidden_biases.size() != q() || output_weights.size() != q())
            throw Error("network coefficient dimensions are inconsistent");
        if (!input_weights.allFinite() || !hidden_biases.allFinite() || !output_weights.allFinite() ||
            !std::isfinite(output_bias))
            throw Error("network coefficients must be finite");
    }

    Eigen::VectorXd flatten() const {
        Eigen::VectorXd theta(size());
        Eigen::Index k = 0;
        for (int j = 0; j < q(); ++j)
            for (int i = 0; i < m(); ++i) theta(k++) = input_weights(j, i);
        theta.segment(k, q()) = hidden_biases;
        k += q();
        theta.segment(k, q()) = output_weights;
        k += q();
        theta(k) = output_bias;
        return theta;
    }

    static NetworkParams unflatten(const Eigen::VectorXd &theta, int m, int q) {
        NetworkParams p(m, q);
        if (theta.size() != p.size()) throw Error("parameter vector length does not match (m, q)");
        Eigen::Index k = 0;
        for (int j = 0; j < q; ++j)
            for (int i = 0; i < m; ++i) p.input_weights(j, i) = theta(k++);
        p.hidden_biases = theta.segment(k, q);
        k += q;
        p.output_weights = theta.segment(k, q);
        k += q;
        p.output_bias = theta(k);
        return p;
    }
};

namespace detail {

inline void check_dim(const NetworkParams &params, Eigen::Index n) {
    if (n != params.m())
        throw Error("input has dimension " + std::to_string(n) + ", network expects " + std::to_string(params.m()));
}

} // namespace detail

inline double forward(const NetworkParams &params, const Eigen::Ref<const Eigen::VectorXd> &x) {
    detail::check_dim(params, x.size());
    const Eigen::VectorXd hidden = (params.input_weights * x + params.hidden_biases).array().tanh();
    return params.output_bias + params.output_weights.dot(hidden);
}

// df/dx, in the same order as x.
inline Eigen::VectorXd input_gradient(const NetworkParams &params, const Eigen::Ref<const Eigen::VectorXd> &x) {
    detail::check_dim(params, x.size());
    const Eigen::ArrayXd h = (params.input_weights * x + params.hidden_biases).array().tanh();
    const Eigen::VectorXd slope = (params.output_weights.array() * (1.0 - h.square())).matrix();
    return params.input_weights.transpose() * slope;
}

// df/dtheta in the flattened order documented on NetworkParams.
inline Eigen::VectorXd parameter_gradient(const NetworkParams &params, const Eigen::Ref<const Eigen::VectorXd> &x) {
    detail::check_dim(params, x.size());
    const int m = params.m();
    const int q = params.q();
    const Eigen::ArrayXd h = (params.input_weights * x + params.hidden_biases).array().tanh();
    const Eigen::ArrayXd slope = params.output_weights.array() * (1.0 - h.square());

    Eigen::VectorXd g(params.size());
    Eigen::Index k = 0;
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < m; ++i) g(k++) = slope(j) * x(i);
    g.segment(k, q) = slope.matrix();
    k += q;
    g.segment(k, q) = h.matrix();
    k += q;
    g(k) = 1.0;
    return g;
}

// Batched forward pass over the rows of `inputs`; also returns the hidden activations.
inline Eigen::VectorXd forward_rows(const NetworkParams &params, const Eigen::MatrixXd &inputs,
                                    Eigen::MatrixXd *hidden_out = nullptr) {
    if (inputs.cols() != params.m()) detail::check_dim(params, inputs.cols());
    Eigen::MatrixXd hidden = inputs * params.input_weights.transpose();
    hidden.rowwise() += params.hidden_biases.transpose();
    hidden = hidden.array().tanh();
    Eigen::VectorXd out = hidden * params.output_weights;
    out.array() += params.output_bias;
    if (hidden_out) *hidden_out = std::move(hidden);
    return out;
}

} // namespace chaoslyap
