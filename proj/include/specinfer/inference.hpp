#pragma once

// Staged per-pair inference of alias specifications and per-method data-flow
// summaries.
//
// For each ordered method pair (store, load) of a class the constraints are
// checked cheapest first, and the NLP-backed abstractions are only computed
// for pairs that survive the earlier stages:
//   1. type:  some store parameter is type-consistent with the load's return;
//   2. units: that edge survives the semantic-unit constraint;
//   3. memop: the store inserts (or writes without deleting) and the load reads;
//   4. solve: pick the optimal edge set and convert it to a specification.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "specinfer/doc_model.hpp"
#include "specinfer/matching.hpp"
#include "specinfer/memop.hpp"
#include "specinfer/name_semantics.hpp"
#include "specinfer/sentence.hpp"
#include "specinfer/value_graph.hpp"

namespace specinfer {

struct AliasSpecification {
    std::string class_name;
    MethodId store;
    MethodId load;
    std::vector<std::pair<int, int>> param_pairs;  // ascending
    int target = 0;

    friend bool operator==(const AliasSpecification&, const AliasSpecification&) = default;
};

enum class Stage { type, units, memop, solved };

inline std::string_view to_string(Stage s)
{
    switch (s) {
    case Stage::type: return "type";
    case Stage::units: return "units";
    case Stage::memop: return "memop";
    case Stage::solved: return "solved";
    }
    return "type";
}

struct PairVerdict {
    MethodId m1;
    MethodId m2;
    Stage stage_reached = Stage::type;
    std::vector<CandidateEdge> edges_selected;
    std::optional<AliasSpecification> spec;
};

struct Endpoint {
    enum class Kind { param, receiver, ret };
    Kind kind = Kind::receiver;
    int index = 0;

    static Endpoint param(int i) { return {Kind::param, i}; }
    static Endpoint receiver() { return {Kind::receiver, 0}; }
    static Endpoint ret() { return {Kind::ret, 0}; }

    std::string to_string() const
    {
        switch (kind) {
        case Kind::param: return "param:" + std::to_string(index);
        case Kind::receiver: return "receiver";
        case Kind::ret: return "return";
        }
        return "receiver";
    }

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Flow {
    Endpoint from;
    Endpoint to;
    friend bool operator==(const Flow&, const Flow&) = default;
};

struct DataFlowSummary {
    std::string class_name;
    MethodId method;
    MemoryOpSet ops;
    std::vector<Flow> flows;
    std::vector<Endpoint> kills;
};

struct Stats {
    std::size_t tagging_invocations = 0;
    std::size_t backend_items = 0;
    std::size_t pairs_total = 0;
    std::size_t pairs_pruned_type = 0;
    std::size_t pairs_pruned_units = 0;
    std::size_t pairs_pruned_memop = 0;
    std::size_t specs_emitted = 0;
    double wall_time_sec = 0.0;
};

struct InferenceOptions {
    bool include_self_pairs = false;
    // Evaluate every stage for every pair (debugging); never changes results.
    bool lazy = true;
    unsigned jobs = 1;
    TypeOptions type_options{};
};

/// Shared state of one inference run: the model, memoized abstractions and
/// options. Thread-safe; one context may serve many concurrent pair jobs.
class InferenceContext {
public:
    InferenceContext(const DocumentationModel& model, const TagLexicon& lexicon,
                     std::shared_ptr<SimilarityBackend> backend, ClassifierConfig cfg = {},
                     InferenceOptions opts = {}, std::shared_ptr<const ClauseAnalyzer> analyzer = nullptr)
        : model_(&model), tagger_(lexicon),
          memop_(std::move(backend), std::move(cfg),
                 analyzer ? std::move(analyzer) : std::make_shared<RuleClauseAnalyzer>(lexicon)),
          opts_(opts)
    {
    }

    const DocumentationModel& model() const { return *model_; }
    NounTagger& tagger() { return tagger_; }
    MemopAbstractor& memop() { return memop_; }
    const InferenceOptions& options() const { return opts_; }

private:
    const DocumentationModel* model_;
    NounTagger tagger_;
    MemopAbstractor memop_;
    InferenceOptions opts_;
};

/// Alias specification induced by a solved verdict's selected edges.
inline std::optional<AliasSpecification> convert(const PairVerdict& v)
{
    if (v.stage_reached != Stage::solved || v.edges_selected.empty()) return std::nullopt;
    AliasSpecification spec;
    spec.class_name = v.m1.class_name;
    spec.store = v.m1;
    spec.load = v.m2;
    bool have_target = false;
    for (const auto& e : v.edges_selected) {
        if (e.kind == EdgeKind::param_return) {
            spec.target = e.from.index;
            have_target = true;
        } else {
            spec.param_pairs.emplace_back(e.from.index, e.to.index);
        }
    }
    if (!have_target) return std::nullopt;
    std::sort(spec.param_pairs.begin(), spec.param_pairs.end());
    return spec;
}

inline PairVerdict infer_pair(InferenceContext& ctx, const ApiValueGraph& g, std::size_t store, std::size_t load)
{
    const MethodDoc& m1 = g.methods().at(store);
    const MethodDoc& m2 = g.methods().at(load);
    const bool lazy = ctx.options().lazy;
    PairVerdict v;
    v.m1 = m1.id;
    v.m2 = m2.id;

    auto has_param_return = [](const std::vector<CandidateEdge>& es) {
        return std::any_of(es.begin(), es.end(), [](const auto& e) { return e.kind == EdgeKind::param_return; });
    };

    // Stage 1: degree + validity are satisfiable only with a type-consistent
    // parameter -> return candidate.
    auto edges = candidate_edges(g, store, load);
    bool type_ok = has_param_return(edges);
    if (!type_ok && lazy) {
        v.stage_reached = Stage::type;
        return v;
    }

    // Stage 2: semantic-unit constraint.
    std::vector<CandidateEdge> surviving;
    for (auto& e : edges) {
        if (edge_unit_ok(ctx.tagger(), e, m1.id.method_name)) surviving.push_back(std::move(e));
    }
    bool units_ok = has_param_return(surviving);
    if (!units_ok && lazy) {
        v.stage_reached = Stage::units;
        return v;
    }

    // Stage 3: memory operation constraint.
    MemoryOpSet ops1 = ctx.memop().abstract(m1.description);
    MemoryOpSet ops2 = ctx.memop().abstract(m2.description);
    bool memop_ok = store_side(ops1) && load_side(ops2);

    if (!type_ok) {
        v.stage_reached = Stage::type;
    } else if (!units_ok) {
        v.stage_reached = Stage::units;
    } else if (!memop_ok) {
        v.stage_reached = Stage::memop;
    } else {
        v.stage_reached = Stage::solved;
        v.edges_selected = solve_matching(surviving);
        v.spec = convert(v);
    }
    return v;
}

inline PairVerdict infer_pair(InferenceContext& ctx, const ApiValueGraph& g, const MethodId& store,
                              const MethodId& load)
{
    return infer_pair(ctx, g, g.method_index(store), g.method_index(load));
}

/// Fixed mapping from operations to flows: inserts and writes move every
/// parameter into the receiver, reads move the receiver to a non-void return,
/// deletes kill the receiver.
inline DataFlowSummary emit_dataflow(const MethodDoc& method, const MemoryOpSet& ops)
{
    DataFlowSummary s;
    s.class_name = method.id.class_name;
    s.method = method.id;
    s.ops = ops;
    if (ops.contains(MemoryOp::I) || ops.contains(MemoryOp::W)) {
        for (std::size_t i = 0; i < method.arity(); ++i) {
            s.flows.push_back({Endpoint::param(static_cast<int>(i)), Endpoint::receiver()});
        }
    }
    if (ops.contains(MemoryOp::R) && !method.return_type.is_void()) {
        s.flows.push_back({Endpoint::receiver(), Endpoint::ret()});
    }
    if (ops.contains(MemoryOp::D)) s.kills.push_back(Endpoint::receiver());
    return s;
}

struct InferenceResult {
    std::vector<AliasSpecification> specs;
    std::vector<DataFlowSummary> summaries;
    std::vector<PairVerdict> verdicts;  // in pair enumeration order
    Stats stats;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
};

namespace detail {

template <typename Job>
void run_parallel(std::size_t count, unsigned jobs, Job&& job)
{
    unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
    }
}

}  // namespace detail

/// Runs pair inference over the given classes, then emits one data-flow
/// summary per available method. Stats cover the pair phase only, so the
/// laziness counters reflect exactly the work the staged checks triggered.
inline InferenceResult infer_classes(InferenceContext& ctx, const std::vector<std::string>& classes)
{
    const auto t0 = std::chrono::steady_clock::now();
    InferenceResult result;

    std::vector<ApiValueGraph> graphs;
    graphs.reserve(classes.size());
    for (const auto& c : classes) graphs.push_back(build_graph(ctx.model(), c, ctx.options().type_options));

    struct PairJob {
        std::size_t graph;
        std::size_t store;
        std::size_t load;
    };
    std::vector<PairJob> pairs;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const std::size_t n = graphs[gi].methods().size();
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (a == b && !ctx.options().include_self_pairs) continue;
                pairs.push_back({gi, a, b});
            }
        }
    }

    const std::size_t tag0 = ctx.tagger().tagging_invocations();
    const std::size_t items0 = ctx.memop().items_scored();

    std::vector<std::optional<PairVerdict>> verdicts(pairs.size());
    std::vector<std::string> pair_errors(pairs.size());
    detail::run_parallel(pairs.size(), ctx.options().jobs, [&](std::size_t i) {
        const auto& job = pairs[i];
        try {
            verdicts[i] = infer_pair(ctx, graphs[job.graph], job.store, job.load);
        } catch (const std::exception& e) {
            const auto& g = graphs[job.graph];
            pair_errors[i] = g.class_name() + ": " + g.methods()[job.store].id.signature() + " -> " +
                             g.methods()[job.load].id.signature() + ": " + e.what();
        }
    });

    Stats& st = result.stats;
    st.pairs_total = pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!pair_errors[i].empty()) {
            result.errors.push_back(std::move(pair_errors[i]));
            continue;
        }
        PairVerdict& v = *verdicts[i];
        switch (v.stage_reached) {
        case Stage::type: ++st.pairs_pruned_type; break;
        case Stage::units: ++st.pairs_pruned_units; break;
        case Stage::memop: ++st.pairs_pruned_memop; break;
        case Stage::solved: break;
        }
        if (v.spec) result.specs.push_back(*v.spec);
        result.verdicts.push_back(std::move(v));
    }
    st.specs_emitted = result.specs.size();
    st.tagging_invocations = ctx.tagger().tagging_invocations() - tag0;
    st.backend_items = ctx.memop().items_scored() - items0;

    std::sort(result.specs.begin(), result.specs.end(), [](const auto& a, const auto& b) {
        return std::tuple(a.class_name, a.store.signature(), a.load.signature()) <
               std::tuple(b.class_name, b.store.signature(), b.load.signature());
    });

    // Data-flow summaries for every available method.
    struct MethodJob {
        std::size_t graph;
        std::size_t method;
    };
    std::vector<MethodJob> methods;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        for (std::size_t m = 0; m < graphs[gi].methods().size(); ++m) methods.push_back({gi, m});
    }
    std::vector<std::optional<DataFlowSummary>> summaries(methods.size());
    std::vector<std::string> method_errors(methods.size());
    detail::run_parallel(methods.size(), ctx.options().jobs, [&](std::size_t i) {
        const MethodDoc& m = graphs[methods[i].graph].methods()[methods[i].method];
        try {
            summaries[i] = emit_dataflow(m, ctx.memop().abstract(m.description));
        } catch (const std::exception& e) {
            method_errors[i] = m.id.class_name + ": " + m.id.signature() + ": " + e.what();
        }
    });
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (summaries[i]) {
            result.summaries.push_back(std::move(*summaries[i]));
        } else {
            result.errors.push_back(std::move(method_errors[i]));
        }
    }
    std::sort(result.summaries.begin(), result.summaries.end(), [](const auto& a, const auto& b) {
        return std::pair(a.class_name, a.method.signature()) < std::pair(b.class_name, b.method.signature());
    });

    st.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

inline InferenceResult infer_class(InferenceContext& ctx, const std::string& class_name)
{
    return infer_classes(ctx, {class_name});
}

}  // namespace specinfer
