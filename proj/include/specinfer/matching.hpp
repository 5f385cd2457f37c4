#pragma once

// Exact solver for the per-pair edge selection problem: choose the largest set
// of candidate edges between a store and a load method such that every API
// value has in- and out-degree at most one and at least one edge reaches the
// load's return value whenever any edge is chosen.
//
// Since the load has a single return node, an optimum is one anchor edge
// (param t -> return) plus a maximum bipartite matching over the
// parameter-to-parameter edges that avoid param t. The solver enumerates
// anchors and runs augmenting-path matching for each.

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specinfer/value_graph.hpp"

namespace specinfer {

/// Index-level view of a candidate edge; `to == -1` targets the return value.
struct IndexEdge {
    int from = 0;
    int to = 0;

    friend bool operator==(const IndexEdge&, const IndexEdge&) = default;
    friend auto operator<=>(const IndexEdge&, const IndexEdge&) = default;
};

struct MatchingSolution {
    std::optional<int> target;                 // source of the anchor edge
    std::vector<std::pair<int, int>> pairs;    // parameter pairs, ascending

    std::size_t size() const { return target ? pairs.size() + 1 : 0; }
    bool empty() const { return !target; }

    friend bool operator==(const MatchingSolution&, const MatchingSolution&) = default;
};

namespace detail {

// Kuhn's augmenting-path maximum matching over a small edge list.
inline std::size_t max_matching_size(std::span<const IndexEdge> edges)
{
    if (edges.empty()) return 0;
    int left = 0, right = 0;
    for (const auto& e : edges) {
        left = std::max(left, e.from + 1);
        right = std::max(right, e.to + 1);
    }
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(left));
    for (const auto& e : edges) adj[static_cast<std::size_t>(e.from)].push_back(e.to);
    std::vector<int> match_right(static_cast<std::size_t>(right), -1);
    std::vector<char> seen;
    auto augment = [&](auto&& self, int u) -> bool {
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (seen[static_cast<std::size_t>(v)]) continue;
            seen[static_cast<std::size_t>(v)] = 1;
            int& owner = match_right[static_cast<std::size_t>(v)];
            if (owner == -1 || self(self, owner)) {
                owner = u;
                return true;
            }
        }
        return false;
    };
    std::size_t size = 0;
    for (int u = 0; u < left; ++u) {
        seen.assign(static_cast<std::size_t>(right), 0);
        if (augment(augment, u)) ++size;
    }
    return size;
}

// Lexicographically smallest sorted matching of the given size.
inline std::vector<std::pair<int, int>> lexmin_matching(const std::vector<IndexEdge>& sorted_edges,
                                                        std::size_t size)
{
    std::vector<std::pair<int, int>> chosen;
    std::vector<int> used_left, used_right;
    auto free = [&](const IndexEdge& e) {
        return std::find(used_left.begin(), used_left.end(), e.from) == used_left.end() &&
               std::find(used_right.begin(), used_right.end(), e.to) == used_right.end();
    };
    std::size_t start = 0;
    while (chosen.size() < size) {
        bool advanced = false;
        for (std::size_t k = start; k < sorted_edges.size() && !advanced; ++k) {
            const IndexEdge& q = sorted_edges[k];
            if (!free(q)) continue;
            std::vector<IndexEdge> rest;
            for (std::size_t r = k + 1; r < sorted_edges.size(); ++r) {
                const IndexEdge& e = sorted_edges[r];
                if (e.from != q.from && e.to != q.to && free(e)) rest.push_back(e);
            }
            if (chosen.size() + 1 + max_matching_size(rest) >= size) {
                chosen.emplace_back(q.from, q.to);
                used_left.push_back(q.from);
                used_right.push_back(q.to);
                start = k + 1;
                advanced = true;
            }
        }
        if (!advanced) break;  // unreachable when `size` is attainable
    }
    return chosen;
}

}  // namespace detail

/// Optimal selection for one store/load pair. Ties prefer the smallest
/// anchor parameter, then the lexicographically smallest pair list.
inline MatchingSolution solve_index_matching(std::span<const IndexEdge> edges)
{
    std::vector<int> anchors;
    std::vector<IndexEdge> pp;
    for (const auto& e : edges) {
        if (e.to == kReturnIndex) {
            anchors.push_back(e.from);
        } else {
            pp.push_back(e);
        }
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    std::sort(pp.begin(), pp.end());
    pp.erase(std::unique(pp.begin(), pp.end()), pp.end());

    MatchingSolution best;
    std::size_t best_size = 0;
    for (int t : anchors) {
        std::vector<IndexEdge> avail;
        for (const auto& e : pp) {
            if (e.from != t) avail.push_back(e);
        }
        std::size_t m = detail::max_matching_size(avail);
        if (m + 1 > best_size) {
            best_size = m + 1;
            best.target = t;
            best.pairs = detail::lexmin_matching(avail, m);
        }
    }
    return best;
}

/// Edge-level form: returns the chosen edges, anchor last.
inline std::vector<CandidateEdge> solve_matching(const std::vector<CandidateEdge>& edges)
{
    std::vector<IndexEdge> idx;
    idx.reserve(edges.size());
    for (const auto& e : edges) idx.push_back({e.from.index, e.to.index});
    MatchingSolution sol = solve_index_matching(idx);

    std::vector<CandidateEdge> out;
    if (sol.empty()) return out;
    auto find_edge = [&](int from, int to) -> const CandidateEdge& {
        for (const auto& e : edges) {
            if (e.from.index == from && e.to.index == to) return e;
        }
        throw Error("solve_matching: selected edge missing from input");
    };
    for (const auto& [a, b] : sol.pairs) out.push_back(find_edge(a, b));
    out.push_back(find_edge(*sol.target, kReturnIndex));
    return out;
}

}  // namespace specinfer
