#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace specinfer;
using testsupport::intent_stack;
using testsupport::mid;

namespace {

const char* kIntent = "android.content.Intent";

MethodId put_extra()
{
    return mid(kIntent, "putStringArrayListExtra", {"java.lang.String", "java.util.ArrayList<java.lang.String>"});
}
MethodId get_extra() { return mid(kIntent, "getStringArrayListExtra", {"java.lang.String"}); }

}  // namespace

TEST(ValueGraph, NodesForIntent)
{
    auto g = build_graph(intent_stack(), kIntent);
    // params: 2 + 1 + 0 + 1 + 1 + 2 = 7; returns: all but the void one = 5
    EXPECT_EQ(g.node_count(), 12u);
    auto idx = g.method_index(put_extra());
    EXPECT_EQ(g.return_node(idx), nullptr);
    ASSERT_EQ(g.params(idx).size(), 2u);
    EXPECT_EQ(g.params(idx)[1].name_label, "value");
    EXPECT_EQ(g.params(idx)[1].description_label, "Add extended data to the intent.");

    auto get = g.method_index(get_extra());
    ASSERT_NE(g.return_node(get), nullptr);
    EXPECT_EQ(g.return_node(get)->name_label, "getStringArrayListExtra");
    EXPECT_TRUE(g.return_node(get)->is_return());
}

TEST(ValueGraph, CandidateEdgesPutGetExtra)
{
    auto g = build_graph(intent_stack(), kIntent);
    auto edges = candidate_edges(g, put_extra(), get_extra());
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_EQ(edges[0].from.index, 0);
    EXPECT_EQ(edges[0].to.index, 0);
    EXPECT_EQ(edges[0].kind, EdgeKind::param_param);
    EXPECT_EQ(edges[1].from.index, 1);
    EXPECT_EQ(edges[1].to.index, kReturnIndex);
    EXPECT_EQ(edges[1].kind, EdgeKind::param_return);
}

TEST(ValueGraph, NoReturnCandidateForFillInGetIdentifier)
{
    auto g = build_graph(intent_stack(), kIntent);
    auto edges = candidate_edges(g, mid(kIntent, "fillIn", {"android.content.Intent", "int"}),
                                 mid(kIntent, "getIdentifier"));
    for (const auto& e : edges) EXPECT_NE(e.kind, EdgeKind::param_return);
}

TEST(ValueGraph, EdgesOnlyFromStoreParams)
{
    auto g = build_graph(intent_stack(), kIntent);
    const auto n = g.methods().size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (const auto& e : candidate_edges(g, a, b)) {
                EXPECT_FALSE(e.from.is_return());
                EXPECT_EQ(e.from.method, g.methods()[a].id);
                EXPECT_EQ(e.to.method, g.methods()[b].id);
                EXPECT_EQ(e.kind == EdgeKind::param_return, e.to.is_return());
                EXPECT_TRUE(type_consistent(g.model(), e.from.type, e.to.type));
            }
        }
    }
}

TEST(ValueGraph, UnknownMethodThrows)
{
    auto g = build_graph(intent_stack(), kIntent);
    EXPECT_THROW(g.method_index(mid(kIntent, "nope")), LookupError);
}
