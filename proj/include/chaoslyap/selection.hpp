#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chaoslyap/core.hpp"
#include "chaoslyap/lyapunov.hpp"

namespace chaoslyap {

enum class RankCriterion { product, ascending_p, combined };

inline std::string to_string(RankCriterion c) {
    switch (c) {
    case RankCriterion::product: return "product";
    case RankCriterion::ascending_p: return "ascending_p";
    case RankCriterion::combined: return "combined";
    }
    return "unknown";
}

inline RankCriterion parse_criterion(const std::string &name) {
    for (auto c : {RankCriterion::product, RankCriterion::ascending_p, RankCriterion::combined})
        if (to_string(c) == name) return c;
    throw Error("unknown ranking criterion '" + name + "' (expected product, ascending_p or combined)");
}

struct RankedVariable {
    std::string signal_id;
    std::string label;
    double lambda_hat = 0.0;
    double p_value = 0.0;
    double score = 0.0; // lambda_hat * p_value
    int rank = 0;
};

struct RankedSelection {
    RankCriterion criterion = RankCriterion::product;
    std::vector<RankedVariable> entries;
    std::vector<std::pair<std::string, std::string>> filtered_out; // (signal_id, reason)
};

namespace detail {

inline std::vector<RankedVariable> to_variables(const std::vector<ChaosTestResult> &results) {
    std::set<std::string> ids;
    std::vector<RankedVariable> vars;
    vars.reserve(results.size());
    for (const auto &r : results) {
        if (!ids.insert(r.signal_id).second) throw Error("duplicate signal id '" + r.signal_id + "' in ranking input");
        vars.push_back({r.signal_id, r.label, r.lambda_hat, r.p_value, r.lambda_hat * r.p_value, 0});
    }
    return vars;
}

inline bool by_score(const RankedVariable &a, const RankedVariable &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.signal_id < b.signal_id;
}

inline bool by_p(const RankedVariable &a, const RankedVariable &b) {
    if (a.p_value != b.p_value) return a.p_value < b.p_value;
    return a.signal_id < b.signal_id;
}

inline void finish(RankedSelection &sel, std::optional<std::size_t> top_n) {
    if (top_n && sel.entries.size() > *top_n) {
        for (std::size_t i = *top_n; i < sel.entries.size(); ++i)
            sel.filtered_out.emplace_back(sel.entries[i].signal_id, "beyond top_n");
        sel.entries.resize(*top_n);
    }
    for (std::size_t i = 0; i < sel.entries.size(); ++i) sel.entries[i].rank = static_cast<int>(i) + 1;
}

} // namespace detail

// Descending lambda * p; ties by signal id. With filter_nonpositive, entries
// with lambda <= 0 or p = 0 move to filtered_out.
inline RankedSelection rank_product(const std::vector<ChaosTestResult> &results, bool filter_nonpositive = true,
                                   std::optional<std::size_t> top_n = std::nullopt) {
    RankedSelection sel;
    sel.criterion = RankCriterion::product;
    for (auto &v : detail::to_variables(results)) {
        if (filter_nonpositive && v.lambda_hat <= 0.0)
            sel.filtered_out.emplace_back(v.signal_id, "lambda <= 0");
        else if (filter_nonpositive && v.p_value == 0.0)
            sel.filtered_out.emplace_back(v.signal_id, "p = 0");
        else
            sel.entries.push_back(std::move(v));
    }
    std::sort(sel.entries.begin(), sel.entries.end(), detail::by_score);
    detail::finish(sel, top_n);
    return sel;
}

inline RankedSelection rank_ascending_p(const std::vector<ChaosTestResult> &results,
                                       std::optional<std::size_t> top_n = std::nullopt) {
    RankedSelection sel;
    sel.criterion = RankCriterion::ascending_p;
    sel.entries = detail::to_variables(results);
    std::sort(sel.entries.begin(), sel.entries.end(), detail::by_p);
    detail::finish(sel, top_n);
    return sel;
}

// Chaotic block (lambda > 0, p > 0) by descending lambda * p, then the
// lambda <= 0 block by ascending p.
inline RankedSelection rank_combined(const std::vector<ChaosTestResult> &results,
                                    std::optional<std::size_t> top_n = std::nullopt) {
    RankedSelection sel;
    sel.criterion = RankCriterion::combined;
    std::vector<RankedVariable> chaotic;
    std::vector<RankedVariable> rest;
    for (auto &v : detail::to_variables(results)) {
        if (v.lambda_hat > 0.0 && v.p_value > 0.0)
            chaotic.push_back(std::move(v));
        else if (v.lambda_hat <= 0.0)
            rest.push_back(std::move(v));
        else
            sel.filtered_out.emplace_back(v.signal_id, "lambda > 0 with p = 0");
    }
    std::sort(chaotic.begin(), chaotic.end(), detail::by_score);
    std::sort(rest.begin(), rest.end(), detail::by_p);
    sel.entries = std::move(chaotic);
    sel.entries.insert(sel.entries.end(), rest.begin(), rest.end());
    detail::finish(sel, top_n);
    return sel;
}

inline RankedSelection rank(const std::vector<ChaosTestResult> &results, RankCriterion criterion,
                            std::optional<std::size_t> top_n = std::nullopt) {
    switch (criterion) {
    case RankCriterion::product: return rank_product(results, true, top_n);
    case RankCriterion::ascending_p: return rank_ascending_p(results, top_n);
    case RankCriterion::combined: return rank_combined(results, top_n);
    }
    throw Error("unknown ranking criterion");
}

namespace detail {

inline std::string format_row(const char *fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

} // namespace detail

// Symbol, Abbrev., lambda, p, lambda x p; five decimals.
inline std::string selection_table(const RankedSelection &sel) {
    std::string out = detail::format_row("%-4s  %-10s  %-10s  %12s  %10s  %10s\n", "Rank", "Symbol", "Abbrev.",
                                         "lambda", "p", "lambda*p");
    for (const auto &e : sel.entries)
        out += detail::format_row("%-4d  %-10s  %-10s  %12.5f  %10.5f  %10.5f\n", e.rank, e.signal_id.c_str(),
                                  e.label.c_str(), e.lambda_hat, e.p_value, e.score);
    if (!sel.filtered_out.empty()) {
        out += "filtered out:";
        for (const auto &[id, reason] : sel.filtered_out) out += " " + id + " (" + reason + ")";
        out += "\n";
    }
    if (sel.criterion != RankCriterion::ascending_p && !sel.entries.empty())
        out += "note: variables near the top (larger lambda*p) call for more robust control loops.\n";
    return out;
}

// Symbol, Abbrev., lambda, p; four decimals.
inline std::string chaos_table(const std::vector<ChaosTestResult> &results) {
    std::string out =
        detail::format_row("%-10s  %-10s  %10s  %8s  %-10s\n", "Symbol", "Abbrev.", "lambda", "p", "(L,m,q)");
    for (const auto &r : results)
        out += detail::format_row("%-10s  %-10s  %10.4f  %8.4f  %-10s\n", r.signal_id.c_str(), r.label.c_str(),
                                  r.lambda_hat, r.p_value, to_string(r.triplet).c_str());
    return out;
}

} // namespace chaoslyap
