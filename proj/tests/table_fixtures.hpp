#pragma once

#include <string>
#include <vector>

#include "chaoslyap/lyapunov.hpp"

namespace fixtures {

struct Row {
    const char *id;
    const char *label;
    double lambda;
    double p;
};

// Tennessee Eastman chaos test output (41 outputs; the 27 listed).
inline const std::vector<Row> &te_chaos_output() {
    static const std::vector<Row> rows = {
        {"y2", "F2D", -4.7226, 0.1569},   {"y3", "F3E", -4.7226, 0.1569},    {"y7", "PR", -4.7226, 0.1569},
        {"y8", "NR", -4.7226, 0.0963},    {"y9", "TR", -4.7226, 0.1306},     {"y10", "FP", 0.1029, 1.0000},
        {"y11", "TS", -4.7226, 0.1004},   {"y12", "NS", -4.7226, 0.0558},    {"y13", "PS", -4.7226, 0.1569},
        {"y15", "ND", -4.7226, 0.0572},   {"y16", "PD", -4.7226, 0.1569},    {"y18", "TD", -4.7226, 0.0826},
        {"y19", "FVD", -4.7226, 0.1478},  {"y20", "PC", -4.7226, 0.1551},    {"y21", "TER", -4.7226, 0.1150},
        {"y22", "TEC", -4.7226, 0.0980},  {"y24", "CBF6R", 0.0081, 0.6802},  {"y26", "CDF6R", 0.0014, 0.5757},
        {"y28", "CFF6R", 0.0014, 0.5625}, {"y32", "CDP", 0.2485, 0.9609},    {"y34", "CFP", 0.0068, 0.7721},
        {"y35", "CGP", 0.0150, 0.9219},   {"y36", "CHP", 0.0083, 0.8271},    {"y37", "CDFLD", 0.0037, 0.6589},
        {"y38", "CEFLD", 0.0256, 0.9990}, {"y39", "CFFLD", 0.3692, 1.0000},  {"y40", "CGFLD", -4.7226, 0.0644},
    };
    return rows;
}

// Controlled-variable selection order with its printed lambda*p column.
struct SelectionRow {
    const char *id;
    const char *label;
    double lambda;
    double p;
    double product;
};

inline const std::vector<SelectionRow> &te_selection_order() {
    static const std::vector<SelectionRow> rows = {
        {"y39", "CFFLD", 0.36928, 1.0000, 0.36928}, {"y32", "CDP", 0.24857, 0.90840, 0.22580},
        {"y10", "FP", 0.10293, 1.00000, 0.10293},   {"y38", "CEFLD", 0.02569, 0.99908, 0.02566},
        {"y35", "CGP", 0.01500, 0.91616, 0.01374},  {"y36", "CHP", 0.00833, 0.82718, 0.00689},
        {"y24", "CBF6R", 0.00815, 0.69181, 0.00563}, {"y34", "CFP", 0.00689, 0.77210, 0.00532},
        {"y37", "CDFLD", 0.00377, 0.65895, 0.00248}, {"y26", "CDF6R", 0.00145, 0.57573, 0.00084},
        {"y28", "CFF6R", 0.00148, 0.56257, 0.00083},
    };
    return rows;
}

inline chaoslyap::ChaosTestResult make_result(const std::string &id, const std::string &label, double lambda,
                                              double p) {
    chaoslyap::ChaosTestResult r;
    r.signal_id = id;
    r.label = label;
    r.lambda_hat = lambda;
    r.p_value = p;
    return r;
}

inline std::vector<chaoslyap::ChaosTestResult> chaos_output_results() {
    std::vector<chaoslyap::ChaosTestResult> out;
    for (const auto &r : te_chaos_output()) out.push_back(make_result(r.id, r.label, r.lambda, r.p));
    return out;
}

// Listed in reverse so tests do not depend on the input already being sorted.
inline std::vector<chaoslyap::ChaosTestResult> selection_results() {
    std::vector<chaoslyap::ChaosTestResult> out;
    const auto &rows = te_selection_order();
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) out.push_back(make_result(it->id, it->label, it->lambda, it->p));
    return out;
}

} // namespace fixtures
