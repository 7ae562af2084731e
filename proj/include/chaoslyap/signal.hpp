#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chaoslyap/core.hpp"

namespace chaoslyap {

// One named scalar time series. Samples are finite and nonempty.
class Signal {
public:
    Signal(std::string id, std::vector<double> samples, std::string label = {}, double sample_period = 1.0)
        : id_(std::move(id)), label_(std::move(label)), samples_(std::move(samples)), sample_period_(sample_period) {
        if (samples_.empty()) throw Error("signal '" + id_ + "' has no samples");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!std::isfinite(samples_[i]))
                throw Error("signal '" + id_ + "' has a non-finite sample at index " + std::to_string(i));
        }
        if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_))
            throw Error("signal '" + id_ + "' needs a positive sample period");
    }

    const std::string &id() const { return id_; }
    const std::string &label() const { return label_; }
    const std::vector<double> &samples() const { return samples_; }
    double sample_period() const { return sample_period_; }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }

    Signal with_label(std::string label) const {
        Signal s = *this;
        s.label_ = std::move(label);
        return s;
    }

private:
    std::string id_;
    std::string label_;
    std::vector<double> samples_;
    double sample_period_;
};

// Regression view of a signal under delay L and dimension m.
// Row r corresponds to target index t = first_target + r (0-based) and holds
// (x[t-L], x[t-2L], ..., x[t-mL]), most recent lag first.
struct LaggedDataset {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;
    int L = 1;
    int m = 1;
    std::size_t first_target = 0;

    Eigen::Index rows() const { return targets.size(); }
};

class CsvError : public Error {
public:
    CsvError(const std::string &what, std::size_t row, std::string column)
        : Error(what), row_(row), column_(std::move(column)) {}

    // 1-based data row (the header is row 0).
    std::size_t row() const { return row_; }
    const std::string &column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

inline std::optional<double> parse_real(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return std::nullopt;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

} // namespace detail

// Parses CSV text (header row of unique names, one column per signal).
inline std::vector<Signal> parse_csv(std::istream &in, const std::vector<std::string> &selection = {}) {
    std::string line;
    if (!std::getline(in, line)) throw Error("CSV input is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    std::vector<std::string> header;
    for (auto cell : detail::split_commas(line)) header.emplace_back(cell);
    std::set<std::string> seen;
    for (const auto &name : header) {
        if (name.empty()) throw Error("CSV header contains an empty column name");
        if (!seen.insert(name).second) throw Error("duplicate CSV header '" + name + "'");
    }

    std::vector<std::size_t> columns;
    if (selection.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) columns.push_back(c);
    } else {
        for (const auto &name : selection) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw Error("selected column '" + name + "' is not in the CSV header");
            columns.push_back(static_cast<std::size_t>(it - header.begin()));
        }
    }

    std::vector<std::vector<double>> data(columns.size());
    std::size_t row = 0;
    std::size_t blank_run = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) {
            ++blank_run;
            continue;
        }
        ++row;
        if (blank_run > 0) throw CsvError("blank line inside CSV data before row " + std::to_string(row), row, {});
        const auto cells = detail::split_commas(line);
        if (cells.size() != header.size())
            throw CsvError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()),
                           row, {});
        for (std::size_t k = 0; k < columns.size(); ++k) {
            const auto value = detail::parse_real(cells[columns[k]]);
            if (!value)
                throw CsvError("non-numeric cell '" + std::string(cells[columns[k]]) + "' at row " + std::to_string(row) +
                                   ", column '" + header[columns[k]] + "'",
                               row, header[columns[k]]);
            data[k].push_back(*value);
        }
    }
    if (row == 0) throw Error("CSV input has a header but no data rows");

    std::vector<Signal> signals;
    signals.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) signals.emplace_back(header[columns[k]], std::move(data[k]));
    return signals;
}

inline std::vector<Signal> load_csv(const std::string &path, const std::vector<std::string> &selection = {}) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file '" + path + "'");
    return parse_csv(in, selection);
}

inline void write_csv(std::ostream &out, const std::vector<Signal> &signals) {
    if (signals.empty()) return;
    const std::size_t n = signals.front().size();
    for (std::size_t k = 0; k < signals.size(); ++k) {
        if (signals[k].size() != n) throw Error("signals written to one CSV must share a length");
        out << (k ? "," : "") << signals[k].id();
    }
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < signals.size(); ++k) {
            if (k) out << ',';
            char buf[64];
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, signals[k][i]);
            out.write(buf, end - buf);
        }
        out << '\n';
    }
}

struct Standardized {
    Signal signal;
    double mean;
    double std;
};

// Zero mean, unit sample standard deviation (n - 1 denominator).
inline Standardized standardize(const Signal &signal) {
    const auto &x = signal.samples();
    if (x.size() < 2) throw Error("degenerate signal: fewer than two samples");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double correction = 0.0;
    for (double v : x) correction += v - mean;
    mean += correction / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    // Rounding in the mean leaves a residual spread of order eps * |x| on constant input.
    if (!(sd > 1e-13 * scale)) throw Error("degenerate signal");

    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mean) / sd;
    return {Signal(signal.id(), std::move(z), signal.label(), signal.sample_period()), mean, sd};
}

inline LaggedDataset build_lagged(const Signal &signal, int L, int m) {
    if (L < 1 || m < 1) throw Error("delay and embedding dimension must be at least 1");
    const std::size_t span = static_cast<std::size_t>(L) * static_cast<std::size_t>(m);
    const std::size_t n = signal.size();
    if (n <= span) throw Error("signal too short for embedding");

    LaggedDataset d;
    d.L = L;
    d.m = m;
    d.first_target = span;
    const auto rows = static_cast<Eigen::Index>(n - span);
    d.inputs.resize(rows, m);
    d.targets.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = span + static_cast<std::size_t>(r);
        d.targets(r) = signal[t];
        for (int j = 0; j < m; ++j) d.inputs(r, j) = signal[t - static_cast<std::size_t>((j + 1) * L)];
    }
    return d;
}

// Spectral rank of X^T X for the lag matrix X of dimension m_max: the number of
// eigenvalues above 1% of the largest, clamped to [1, m_max].
inline int suggest_embedding_dim(const Signal &signal, int L, int m_max, double relative_threshold = 0.01) {
    if (m_max < 1) throw Error("m_max must be at least 1");
    const LaggedDataset d = build_lagged(signal, L, m_max);
    const Eigen::MatrixXd gram = d.inputs.transpose() * d.inputs;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd &ev = eig.eigenvalues();
    const double largest = ev.maxCoeff();
    int count = 0;
    if (largest > 0.0) {
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) > relative_threshold * largest) ++count;
    }
    return std::clamp(count, 1, m_max);
}

} // namespace chaoslyap
