#pragma once

// Set-based scoring of predicted specifications against ground truth.
// Accuracy is Jaccard-style: tp / (tp + fp + fn).

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "specinfer/output.hpp"

namespace specinfer {

struct Metrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> accuracy;
};

enum class MatchMode { exact, relaxed };

inline std::optional<MatchMode> parse_match_mode(std::string_view s)
{
    if (s == "exact") return MatchMode::exact;
    if (s == "relaxed") return MatchMode::relaxed;
    return std::nullopt;
}

template <typename Key>
Metrics score_sets(const std::set<Key>& pred, const std::set<Key>& truth)
{
    Metrics m;
    for (const auto& k : pred) {
        if (truth.count(k)) {
            ++m.tp;
        } else {
            ++m.fp;
        }
    }
    m.fn = truth.size() - m.tp;
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    if (m.precision && m.recall) {
        double s = *m.precision + *m.recall;
        m.f1 = s == 0.0 ? 0.0 : 2.0 * *m.precision * *m.recall / s;
    }
    m.accuracy = ratio(m.tp, m.tp + m.fp + m.fn);
    return m;
}

inline Metrics compare_alias(const std::vector<AliasRecord>& pred, const std::vector<AliasRecord>& truth,
                             MatchMode mode = MatchMode::exact)
{
    using Key = std::tuple<std::string, std::string, std::string, std::vector<std::pair<int, int>>, int>;
    auto keys = [mode](const std::vector<AliasRecord>& recs) {
        std::set<Key> out;
        for (const auto& r : recs) {
            auto pairs = r.param_pairs;
            std::sort(pairs.begin(), pairs.end());
            if (mode == MatchMode::relaxed) pairs.clear();
            out.emplace(r.class_name, r.store, r.load, std::move(pairs), r.target);
        }
        return out;
    };
    return score_sets(keys(pred), keys(truth));
}

/// Flow-level comparison: each flow and each kill of each method is one item.
inline Metrics compare_dataflow(const std::vector<DataflowRecord>& pred, const std::vector<DataflowRecord>& truth)
{
    using Key = std::tuple<std::string, std::string, std::string, std::string>;
    auto keys = [](const std::vector<DataflowRecord>& recs) {
        std::set<Key> out;
        for (const auto& r : recs) {
            for (const auto& f : r.flows) out.emplace(r.class_name, r.method, f.from, f.to);
            for (const auto& k : r.kills) out.emplace(r.class_name, r.method, k, "kill");
        }
        return out;
    };
    return score_sets(keys(pred), keys(truth));
}

inline nlohmann::ordered_json metrics_to_json(const Metrics& m)
{
    auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    j["precision"] = opt(m.precision);
    j["recall"] = opt(m.recall);
    j["f1"] = opt(m.f1);
    j["accuracy"] = opt(m.accuracy);
    return j;
}

}  // namespace specinfer
