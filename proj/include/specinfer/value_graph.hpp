#pragma once

// API value graph: parameters and non-void returns of the methods available on
// one class, with name/description labels. Edges are produced per ordered
// method pair on demand rather than materialized for the whole class.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "specinfer/doc_model.hpp"
#include "specinfer/error.hpp"

namespace specinfer {

inline constexpr int kReturnIndex = -1;

struct ApiValueNode {
    std::string class_name;
    MethodId method;
    int index = kReturnIndex;  // -1 for the return value
    TypeName type;
    std::string name_label;
    std::string description_label;

    bool is_return() const { return index == kReturnIndex; }

    friend bool operator==(const ApiValueNode&, const ApiValueNode&) = default;
};

enum class EdgeKind { param_param, param_return };

struct CandidateEdge {
    ApiValueNode from;  // parameter of the store method
    ApiValueNode to;    // parameter or return of the load method
    EdgeKind kind = EdgeKind::param_param;

    friend bool operator==(const CandidateEdge&, const CandidateEdge&) = default;
};

class ApiValueGraph {
public:
    ApiValueGraph() = default;

    ApiValueGraph(const DocumentationModel& model, std::string class_name, TypeOptions type_opts = {})
        : model_(&model), class_name_(std::move(class_name)), type_opts_(type_opts)
    {
        methods_ = resolve_universe(model, class_name_);
        nodes_.resize(methods_.size());
        for (std::size_t k = 0; k < methods_.size(); ++k) {
            const MethodDoc& m = methods_[k];
            auto& per = nodes_[k];
            for (std::size_t i = 0; i < m.arity(); ++i) {
                per.params.push_back(ApiValueNode{class_name_, m.id, static_cast<int>(i),
                                                  m.id.param_types[i], m.param_names[i], m.description});
            }
            if (!m.return_type.is_void()) {
                per.ret = ApiValueNode{class_name_, m.id, kReturnIndex, m.return_type,
                                       m.id.method_name, m.description};
                per.has_return = true;
            }
        }
    }

    const std::string& class_name() const { return class_name_; }
    const std::vector<MethodDoc>& methods() const { return methods_; }
    const DocumentationModel& model() const { return *model_; }
    const TypeOptions& type_options() const { return type_opts_; }

    std::size_t method_index(const MethodId& id) const
    {
        for (std::size_t k = 0; k < methods_.size(); ++k) {
            if (methods_[k].id == id) return k;
        }
        throw LookupError("method " + id.signature() + " not in universe of " + class_name_);
    }

    const MethodDoc& method(const MethodId& id) const { return methods_[method_index(id)]; }

    const std::vector<ApiValueNode>& params(std::size_t method_idx) const { return nodes_.at(method_idx).params; }

    const ApiValueNode* return_node(std::size_t method_idx) const
    {
        const auto& per = nodes_.at(method_idx);
        return per.has_return ? &per.ret : nullptr;
    }

    /// Every node, grouped by method in universe order, parameters before the return.
    std::vector<ApiValueNode> nodes() const
    {
        std::vector<ApiValueNode> out;
        for (const auto& per : nodes_) {
            out.insert(out.end(), per.params.begin(), per.params.end());
            if (per.has_return) out.push_back(per.ret);
        }
        return out;
    }

    std::size_t node_count() const
    {
        std::size_t n = 0;
        for (const auto& per : nodes_) n += per.params.size() + (per.has_return ? 1 : 0);
        return n;
    }

private:
    struct MethodNodes {
        std::vector<ApiValueNode> params;
        ApiValueNode ret;
        bool has_return = false;
    };

    const DocumentationModel* model_ = nullptr;
    std::string class_name_;
    TypeOptions type_opts_;
    std::vector<MethodDoc> methods_;
    std::vector<MethodNodes> nodes_;
};

inline ApiValueGraph build_graph(const DocumentationModel& model, std::string_view class_name,
                                 TypeOptions type_opts = {})
{
    return ApiValueGraph(model, std::string(class_name), type_opts);
}

/// Type-consistent edges from parameters of `store` to parameters and the
/// return of `load`, ordered by source index, then target index with the
/// return last.
inline std::vector<CandidateEdge> candidate_edges(const ApiValueGraph& g, std::size_t store, std::size_t load)
{
    std::vector<CandidateEdge> out;
    const auto& sources = g.params(store);
    const auto& targets = g.params(load);
    const ApiValueNode* ret = g.return_node(load);
    for (const auto& from : sources) {
        for (const auto& to : targets) {
            if (type_consistent(g.model(), from.type, to.type, g.type_options())) {
                out.push_back({from, to, EdgeKind::param_param});
            }
        }
        if (ret && type_consistent(g.model(), from.type, ret->type, g.type_options())) {
            out.push_back({from, *ret, EdgeKind::param_return});
        }
    }
    return out;
}

inline std::vector<CandidateEdge> candidate_edges(const ApiValueGraph& g, const MethodId& store, const MethodId& load)
{
    return candidate_edges(g, g.method_index(store), g.method_index(load));
}

}  // namespace specinfer
