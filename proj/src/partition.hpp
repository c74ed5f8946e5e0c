#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

namespace latcalc::detail {

// Coalescing merges bitwise-equal values only, keeping band identities exact.
inline bool bitsEqual(double a, double b) {
    std::uint64_t ua, ub;
    std::memcpy(&ua, &a, sizeof a);
    std::memcpy(&ub, &b, sizeof b);
    return ua == ub;
}

inline bool isPow2(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Signed zeros carry no order-theoretic meaning and would fragment the
// canonical form (-0.0 is not bitwise 0.0), so stored values fold them away.
inline double canonValue(double v) { return v == 0.0 ? 0.0 : v; }

// Builds a canonical dyadic partition piece by piece. pushDyadic appends a
// piece that is already a dyadic interval and merges equal-valued sibling
// pieces ([s,m) and [m,e) of equal power-of-two length with s aligned to
// the doubled length). pushRange accepts an arbitrary tick range and splits
// it greedily into maximal dyadic blocks first.
struct PartitionBuilder {
    std::vector<std::uint32_t> ends;
    std::vector<double> values;

    void pushDyadic(std::uint32_t end, double v) {
        ends.push_back(end);
        values.push_back(canonValue(v));
        for (;;) {
            size_t n = ends.size();
            if (n < 2) return;
            std::uint32_t s = n >= 3 ? ends[n - 3] : 0u;
            std::uint32_t m = ends[n - 2];
            std::uint32_t e = ends[n - 1];
            std::uint32_t len1 = m - s;
            std::uint32_t len2 = e - m;
            if (len1 != len2 || !bitsEqual(values[n - 2], values[n - 1])) return;
            if (s % (2 * len1) != 0) return;
            ends.erase(ends.end() - 2);
            values.pop_back();
        }
    }

    void pushRange(std::uint32_t start, std::uint32_t end, double v) {
        std::uint32_t s = start;
        while (s < end) {
            std::uint32_t align = s == 0 ? 0u : (s & (~s + 1));  // lowest set bit
            std::uint32_t len = std::bit_floor(end - s);
            if (align != 0) len = std::min(len, align);
            pushDyadic(s + len, v);
            s += len;
        }
    }
};

}  // namespace latcalc::detail
