// Two Lorenz trajectories started 1e-9 apart; prints t, x_a, x_b and their
// Euclidean separation every 50 RK4 steps.

#include <cmath>
#include <cstdio>

#include "chaoslyap/generators.hpp"

int main() {
    using namespace chaoslyap;
    const LorenzParams p;
    const double h = 0.01;
    const int steps = 4000;
    const auto a = lorenz_trajectory(p, {1.0, 1.0, 1.0}, steps, h);
    const auto b = lorenz_trajectory(p, {1.0 + 1e-9, 1.0, 1.0}, steps, h);
    std::printf("%8s %12s %12s %14s\n", "t", "x_a", "x_b", "separation");
    for (int i = 0; i <= steps; i += 50) {
        const double d = std::sqrt(std::pow(a[i][0] - b[i][0], 2) + std::pow(a[i][1] - b[i][1], 2) +
                                   std::pow(a[i][2] - b[i][2], 2));
        std::printf("%8.2f %12.6f %12.6f %14.6e\n", i * h, a[i][0], b[i][0], d);
    }
}
