#pragma once

// Exhaustive reference for the per-pair selection problem. Enumerates every
// subset of the candidate edges and keeps the largest one that respects the
// degree bounds (each parameter of either method used at most once, the
// return used at most once) and contains an edge into the return.

#include <cstdint>
#include <vector>

namespace oracle {

struct Edge {
    int from;
    int to;  // -1: the load's return value
};

inline int best_subset_size(const std::vector<Edge>& edges)
{
    const std::size_t n = edges.size();
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::uint32_t out_used = 0, in_used = 0;
        bool ok = true, has_ret = false;
        int size = 0;
        for (std::size_t k = 0; k < n && ok; ++k) {
            if (!(mask & (1u << k))) continue;
            const Edge& e = edges[k];
            std::uint32_t out_bit = 1u << e.from;
            std::uint32_t in_bit = e.to < 0 ? (1u << 31) : (1u << e.to);
            if ((out_used & out_bit) || (in_used & in_bit)) ok = false;
            out_used |= out_bit;
            in_used |= in_bit;
            has_ret = has_ret || e.to < 0;
            ++size;
        }
        if (ok && has_ret && size > best) best = size;
    }
    return best;
}

// Whether `chosen` is a feasible selection drawn from `edges`.
inline bool feasible(const std::vector<Edge>& edges, const std::vector<Edge>& chosen)
{
    std::uint32_t out_used = 0, in_used = 0;
    int returns = 0;
    for (const Edge& c : chosen) {
        bool present = false;
        for (const Edge& e : edges) present = present || (e.from == c.from && e.to == c.to);
        if (!present) return false;
        std::uint32_t out_bit = 1u << c.from;
        std::uint32_t in_bit = c.to < 0 ? (1u << 31) : (1u << c.to);
        if ((out_used & out_bit) || (in_used & in_bit)) return false;
        out_used |= out_bit;
        in_used |= in_bit;
        returns += c.to < 0;
    }
    return chosen.empty() || returns == 1;
}

}  // namespace oracle
