#pragma once

// JSON serialization of inference results (specs, data-flow summaries, stats)
// and the string-level records used when reading them back for evaluation.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specinfer/error.hpp"
#include "specinfer/inference.hpp"

namespace specinfer {

/// Alias specification as it appears on disk, methods by signature.
struct AliasRecord {
    std::string class_name;
    std::string store;
    std::string load;
    std::vector<std::pair<int, int>> param_pairs;
    int target = 0;

    friend auto operator<=>(const AliasRecord&, const AliasRecord&) = default;
};

struct FlowRecord {
    std::string from;
    std::string to;

    friend auto operator<=>(const FlowRecord&, const FlowRecord&) = default;
};

struct DataflowRecord {
    std::string class_name;
    std::string method;
    std::vector<std::string> ops;
    std::vector<FlowRecord> flows;
    std::vector<std::string> kills;
};

inline AliasRecord to_record(const AliasSpecification& s)
{
    return {s.class_name, s.store.signature(), s.load.signature(), s.param_pairs, s.target};
}

inline DataflowRecord to_record(const DataFlowSummary& s)
{
    DataflowRecord r{s.class_name, s.method.signature(), s.ops.letters(), {}, {}};
    for (const auto& f : s.flows) r.flows.push_back({f.from.to_string(), f.to.to_string()});
    for (const auto& k : s.kills) r.kills.push_back(k.to_string());
    return r;
}

inline nlohmann::ordered_json specs_to_json(const std::vector<AliasRecord>& specs)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : specs) {
        auto pairs = nlohmann::ordered_json::array();
        for (const auto& [a, b] : s.param_pairs) pairs.push_back({a, b});
        nlohmann::ordered_json j;
        j["class"] = s.class_name;
        j["store"] = s.store;
        j["load"] = s.load;
        j["paramPairs"] = std::move(pairs);
        j["target"] = s.target;
        arr.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["specs"] = std::move(arr);
    return doc;
}

inline nlohmann::ordered_json specs_to_json(const std::vector<AliasSpecification>& specs)
{
    std::vector<AliasRecord> recs;
    for (const auto& s : specs) recs.push_back(to_record(s));
    return specs_to_json(recs);
}

inline nlohmann::ordered_json dataflow_to_json(const std::vector<DataflowRecord>& summaries)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : summaries) {
        auto flows = nlohmann::ordered_json::array();
        for (const auto& f : s.flows) {
            nlohmann::ordered_json fj;
            fj["from"] = f.from;
            fj["to"] = f.to;
            flows.push_back(std::move(fj));
        }
        nlohmann::ordered_json j;
        j["class"] = s.class_name;
        j["method"] = s.method;
        j["ops"] = s.ops;
        j["flows"] = std::move(flows);
        j["kills"] = s.kills;
        arr.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["summaries"] = std::move(arr);
    return doc;
}

inline nlohmann::ordered_json dataflow_to_json(const std::vector<DataFlowSummary>& summaries)
{
    std::vector<DataflowRecord> recs;
    for (const auto& s : summaries) recs.push_back(to_record(s));
    return dataflow_to_json(recs);
}

inline nlohmann::ordered_json stats_to_json(const Stats& s)
{
    nlohmann::ordered_json j;
    j["taggingInvocations"] = s.tagging_invocations;
    j["backendItems"] = s.backend_items;
    j["pairsTotal"] = s.pairs_total;
    j["prunedType"] = s.pairs_pruned_type;
    j["prunedUnits"] = s.pairs_pruned_units;
    j["prunedMemop"] = s.pairs_pruned_memop;
    j["specs"] = s.specs_emitted;
    j["wallTimeSec"] = s.wall_time_sec;
    return j;
}

inline std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline nlohmann::json parse_json_text(std::string_view text, const std::string& what)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

}  // namespace detail

inline std::vector<AliasRecord> parse_specs(std::string_view text)
{
    auto doc = detail::parse_json_text(text, "specs file");
    if (!doc.is_object() || !doc.contains("specs") || !doc["specs"].is_array()) {
        throw ParseError("specs file: expected object with array \"specs\"");
    }
    std::vector<AliasRecord> out;
    std::size_t k = 0;
    for (const auto& j : doc["specs"]) {
        std::string where = "specs[" + std::to_string(k++) + "]";
        try {
            AliasRecord r;
            r.class_name = j.at("class").get<std::string>();
            r.store = j.at("store").get<std::string>();
            r.load = j.at("load").get<std::string>();
            for (const auto& p : j.at("paramPairs")) {
                if (!p.is_array() || p.size() != 2) throw ParseError(where + ": paramPairs entry must be [i1,i2]");
                r.param_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
            }
            r.target = j.at("target").get<int>();
            if (r.target < 0) throw ParseError(where + ": negative target");
            std::sort(r.param_pairs.begin(), r.param_pairs.end());
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<DataflowRecord> parse_dataflow(std::string_view text)
{
    auto doc = detail::parse_json_text(text, "dataflow file");
    if (!doc.is_object() || !doc.contains("summaries") || !doc["summaries"].is_array()) {
        throw ParseError("dataflow file: expected object with array \"summaries\"");
    }
    std::vector<DataflowRecord> out;
    std::size_t k = 0;
    for (const auto& j : doc["summaries"]) {
        std::string where = "summaries[" + std::to_string(k++) + "]";
        try {
            DataflowRecord r;
            r.class_name = j.at("class").get<std::string>();
            r.method = j.at("method").get<std::string>();
            r.ops = j.value("ops", std::vector<std::string>{});
            for (const auto& f : j.at("flows")) r.flows.push_back({f.at("from").get<std::string>(), f.at("to").get<std::string>()});
            r.kills = j.value("kills", std::vector<std::string>{});
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return out;
}

}  // namespace specinfer
