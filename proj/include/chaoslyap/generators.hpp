#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chaoslyap/core.hpp"
#include "chaoslyap/random.hpp"
#include "chaoslyap/signal.hpp"

namespace chaoslyap {

enum class GeneratorKind { logistic, henon, lorenz, ar1, sine, iid_noise };

inline std::string to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::logistic: return "logistic";
    case GeneratorKind::henon: return "henon";
    case GeneratorKind::lorenz: return "lorenz";
    case GeneratorKind::ar1: return "ar1";
    case GeneratorKind::sine: return "sine";
    case GeneratorKind::iid_noise: return "iid_noise";
    }
    return "unknown";
}

inline GeneratorKind parse_generator_kind(const std::string &name) {
    for (auto k : {GeneratorKind::logistic, GeneratorKind::henon, GeneratorKind::lorenz, GeneratorKind::ar1,
                   GeneratorKind::sine, GeneratorKind::iid_noise})
        if (to_string(k) == name) return k;
    throw Error("unknown generator kind '" + name + "'");
}

// Parameters per kind (defaults in parentheses):
//   logistic  r (4), x0 (0.3)                         x_{t+1} = r x_t (1 - x_t)
//   henon     a (1.4), b (0.3), x0 (0), y0 (0)         x_{t+1} = 1 - a x_t^2 + y_t, y_{t+1} = b x_t
//   lorenz    sigma (10), rho (28), beta (8/3), h (0.01), stride (5), x0, y0, z0 (1, 1, 1)
//             RK4 with step h, x sampled every `stride` steps
//   ar1       phi (0.5), innovation_std (1), x0        x_t = phi x_{t-1} + e_t; x_0 = x0 when given, else e_0
//   sine      amplitude (1), period (20), phase (0)
//   iid_noise std (1)
// Dynamics draw from Rng(seed); observation noise (noise_std) from Rng(derive_seed(seed, 1))
// and is added after the trajectory is generated and transient_skip samples are dropped.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::logistic;
    std::map<std::string, double> parameters;
    int n = 1000;
    std::uint64_t seed = 0;
    double noise_std = 0.0;
    int transient_skip = 0;

    double param(const std::string &name, double fallback) const {
        const auto it = parameters.find(name);
        return it == parameters.end() ? fallback : it->second;
    }
};

inline const std::set<std::string> &generator_parameter_names(GeneratorKind kind) {
    static const std::map<GeneratorKind, std::set<std::string>> names = {
        {GeneratorKind::logistic, {"r", "x0"}},
        {GeneratorKind::henon, {"a", "b", "x0", "y0"}},
        {GeneratorKind::lorenz, {"sigma", "rho", "beta", "h", "stride", "x0", "y0", "z0"}},
        {GeneratorKind::ar1, {"phi", "innovation_std", "x0"}},
        {GeneratorKind::sine, {"amplitude", "period", "phase"}},
        {GeneratorKind::iid_noise, {"std"}},
    };
    return names.at(kind);
}

inline void validate(const GeneratorSpec &spec) {
    if (spec.n < 1) throw Error("generator needs n >= 1");
    if (spec.transient_skip < 0) throw Error("transient_skip must be nonnegative");
    if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) throw Error("noise_std must be >= 0");
    const auto &allowed = generator_parameter_names(spec.kind);
    for (const auto &[name, value] : spec.parameters) {
        if (!allowed.count(name)) throw Error("parameter '" + name + "' does not apply to " + to_string(spec.kind));
        if (!std::isfinite(value)) throw Error("parameter '" + name + "' must be finite");
    }
    switch (spec.kind) {
    case GeneratorKind::logistic: {
        const double x0 = spec.param("x0", 0.3);
        const double r = spec.param("r", 4.0);
        if (!(x0 > 0.0 && x0 < 1.0)) throw Error("logistic initial condition must lie in (0, 1)");
        if (!(r > 0.0 && r <= 4.0)) throw Error("logistic r must lie in (0, 4]");
        break;
    }
    case GeneratorKind::lorenz: {
        if (!(spec.param("h", 0.01) > 0.0)) throw Error("lorenz step h must be positive");
        const double stride = spec.param("stride", 5.0);
        if (!(stride >= 1.0) || stride != std::floor(stride)) throw Error("lorenz stride must be a positive integer");
        break;
    }
    case GeneratorKind::ar1:
        if (!(spec.param("innovation_std", 1.0) >= 0.0)) throw Error("ar1 innovation_std must be >= 0");
        break;
    case GeneratorKind::sine:
        if (!(spec.param("period", 20.0) > 0.0)) throw Error("sine period must be positive");
        break;
    case GeneratorKind::iid_noise:
        if (!(spec.param("std", 1.0) >= 0.0)) throw Error("iid_noise std must be >= 0");
        break;
    case GeneratorKind::henon:
        break;
    }
}

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

using Vec3 = std::array<double, 3>;

inline Vec3 lorenz_field(const LorenzParams &p, const Vec3 &s) {
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

inline Vec3 rk4_step(const LorenzParams &p, const Vec3 &s, double h) {
    auto axpy = [](const Vec3 &a, double c, const Vec3 &b) { return Vec3{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]}; };
    const Vec3 k1 = lorenz_field(p, s);
    const Vec3 k2 = lorenz_field(p, axpy(s, h / 2, k1));
    const Vec3 k3 = lorenz_field(p, axpy(s, h / 2, k2));
    const Vec3 k4 = lorenz_field(p, axpy(s, h, k3));
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// States after 0..steps RK4 steps (steps + 1 entries).
inline std::vector<Vec3> lorenz_trajectory(const LorenzParams &p, Vec3 start, int steps, double h) {
    if (!(h > 0.0)) throw Error("lorenz step h must be positive");
    std::vector<Vec3> states;
    states.reserve(static_cast<std::size_t>(steps) + 1);
    states.push_back(start);
    for (int i = 0; i < steps; ++i) states.push_back(rk4_step(p, states.back(), h));
    return states;
}

inline Signal generate(const GeneratorSpec &spec) {
    validate(spec);
    const std::size_t total = static_cast<std::size_t>(spec.n) + static_cast<std::size_t>(spec.transient_skip);
    std::vector<double> x;
    x.reserve(total);
    Rng rng(spec.seed);

    switch (spec.kind) {
    case GeneratorKind::logistic: {
        const double r = spec.param("r", 4.0);
        double v = spec.param("x0", 0.3);
        for (std::size_t i = 0; i < total; ++i) {
            x.push_back(v);
            v = r * v * (1.0 - v);
        }
        break;
    }
    case GeneratorKind::henon: {
        const double a = spec.param("a", 1.4);
        const double b = spec.param("b", 0.3);
        double u = spec.param("x0", 0.0);
        double w = spec.param("y0", 0.0);
        for (std::size_t i = 0; i < total; ++i) {
            x.push_back(u);
            const double next = 1.0 - a * u * u + w;
            w = b * u;
            u = next;
        }
        break;
    }
    case GeneratorKind::lorenz: {
        const LorenzParams p{spec.param("sigma", 10.0), spec.param("rho", 28.0), spec.param("beta", 8.0 / 3.0)};
        const double h = spec.param("h", 0.01);
        const auto stride = static_cast<int>(spec.param("stride", 5.0));
        Vec3 s{spec.param("x0", 1.0), spec.param("y0", 1.0), spec.param("z0", 1.0)};
        for (std::size_t i = 0; i < total; ++i) {
            x.push_back(s[0]);
            for (int k = 0; k < stride; ++k) s = rk4_step(p, s, h);
        }
        break;
    }
    case GeneratorKind::ar1: {
        const double phi = spec.param("phi", 0.5);
        const double sd = spec.param("innovation_std", 1.0);
        double v = spec.parameters.count("x0") ? spec.param("x0", 0.0) : sd * rng.normal();
        for (std::size_t i = 0; i < total; ++i) {
            x.push_back(v);
            v = phi * v + sd * rng.normal();
        }
        break;
    }
    case GeneratorKind::sine: {
        const double amp = spec.param("amplitude", 1.0);
        const double period = spec.param("period", 20.0);
        const double phase = spec.param("phase", 0.0);
        for (std::size_t i = 0; i < total; ++i)
            x.push_back(amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period + phase));
        break;
    }
    case GeneratorKind::iid_noise: {
        const double sd = spec.param("std", 1.0);
        for (std::size_t i = 0; i < total; ++i) x.push_back(sd * rng.normal());
        break;
    }
    }

    x.erase(x.begin(), x.begin() + spec.transient_skip);
    if (spec.noise_std > 0.0) {
        Rng noise(derive_seed(spec.seed, 1));
        for (double &v : x) v += spec.noise_std * noise.normal();
    }
    return Signal(to_string(spec.kind), std::move(x));
}

struct OracleOptions {
    int orbit_length = 100000;
    int transient = 1000;
};

// Largest exponent of the generating system itself, per emitted sample.
inline double oracle_lambda(const GeneratorSpec &spec, const OracleOptions &opt = {}) {
    validate(spec);
    switch (spec.kind) {
    case GeneratorKind::logistic: {
        const double r = spec.param("r", 4.0);
        double v = spec.param("x0", 0.3);
        for (int i = 0; i < opt.transient; ++i) v = r * v * (1.0 - v);
        double sum = 0.0;
        for (int i = 0; i < opt.orbit_length; ++i) {
            sum += std::log(std::abs(r * (1.0 - 2.0 * v)));
            v = r * v * (1.0 - v);
        }
        return sum / opt.orbit_length;
    }
    case GeneratorKind::henon: {
        const double a = spec.param("a", 1.4);
        const double b = spec.param("b", 0.3);
        double u = spec.param("x0", 0.0);
        double w = spec.param("y0", 0.0);
        Eigen::Vector2d dir(1.0, 0.0);
        double sum = 0.0;
        for (int i = 0; i < opt.transient + opt.orbit_length; ++i) {
            Eigen::Matrix2d J;
            J << -2.0 * a * u, 1.0, b, 0.0;
            dir = J * dir;
            const double g = dir.norm();
            dir /= g;
            if (i >= opt.transient) sum += std::log(g);
            const double next = 1.0 - a * u * u + w;
            w = b * u;
            u = next;
        }
        return sum / opt.orbit_length;
    }
    case GeneratorKind::ar1:
        return std::log(std::abs(spec.param("phi", 0.5)));
    case GeneratorKind::lorenz: {
        // Benettin: RK4 on the state plus one tangent vector, renormalized every sample.
        const LorenzParams p{spec.param("sigma", 10.0), spec.param("rho", 28.0), spec.param("beta", 8.0 / 3.0)};
        const double h = spec.param("h", 0.01);
        const auto stride = static_cast<int>(spec.param("stride", 5.0));
        using State = Eigen::Matrix<double, 6, 1>;
        auto field = [&](const State &s) {
            State d;
            d(0) = p.sigma * (s(1) - s(0));
            d(1) = s(0) * (p.rho - s(2)) - s(1);
            d(2) = s(0) * s(1) - p.beta * s(2);
            d(3) = p.sigma * (s(4) - s(3));
            d(4) = (p.rho - s(2)) * s(3) - s(4) - s(0) * s(5);
            d(5) = s(1) * s(3) + s(0) * s(4) - p.beta * s(5);
            return d;
        };
        State s;
        s << spec.param("x0", 1.0), spec.param("y0", 1.0), spec.param("z0", 1.0), 1.0, 0.0, 0.0;
        double sum = 0.0;
        const int samples = opt.transient + opt.orbit_length;
        for (int i = 0; i < samples; ++i) {
            for (int k = 0; k < stride; ++k) {
                const State k1 = field(s);
                const State k2 = field(s + h / 2 * k1);
                const State k3 = field(s + h / 2 * k2);
                const State k4 = field(s + h * k3);
                s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            const double g = s.tail<3>().norm();
            s.tail<3>() /= g;
            if (i >= opt.transient) sum += std::log(g);
        }
        return sum / opt.orbit_length;
    }
    case GeneratorKind::sine:
    case GeneratorKind::iid_noise:
        break;
    }
    throw Error("no oracle exponent for generator kind " + to_string(spec.kind));
}

} // namespace chaoslyap
