#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace chaoslyap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// (L, m, q): delay, embedding dimension, hidden units.
struct Triplet {
    int L = 1;
    int m = 1;
    int q = 1;

    friend bool operator==(const Triplet &, const Triplet &) = default;
};

// Tie order used when two triplets report the same exponent: smaller m, then q, then L.
inline bool tie_less(const Triplet &a, const Triplet &b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.q != b.q) return a.q < b.q;
    return a.L < b.L;
}

inline std::string to_string(const Triplet &t) {
    return "(" + std::to_string(t.L) + "," + std::to_string(t.m) + "," + std::to_string(t.q) + ")";
}

} // namespace chaoslyap
