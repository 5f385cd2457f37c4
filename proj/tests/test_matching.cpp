#include <gtest/gtest.h>

#include <random>

#include "oracles/matching_oracle.hpp"
#include "test_support.hpp"

using namespace specinfer;

namespace {

std::vector<IndexEdge> random_instance(std::mt19937& rng)
{
    std::uniform_int_distribution<int> arity(0, 4);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int n1 = arity(rng), n2 = arity(rng);
    double density = coin(rng);
    bool has_return = coin(rng) < 0.85;
    std::vector<IndexEdge> edges;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            if (coin(rng) < density) edges.push_back({i, j});
        }
        if (has_return && coin(rng) < density) edges.push_back({i, kReturnIndex});
    }
    return edges;
}

std::vector<oracle::Edge> to_oracle(const std::vector<IndexEdge>& edges)
{
    std::vector<oracle::Edge> out;
    for (const auto& e : edges) out.push_back({e.from, e.to});
    return out;
}

std::vector<oracle::Edge> chosen(const MatchingSolution& s)
{
    std::vector<oracle::Edge> out;
    for (const auto& [a, b] : s.pairs) out.push_back({a, b});
    if (s.target) out.push_back({*s.target, -1});
    return out;
}

}  // namespace

TEST(Matching, WorkedExample)
{
    std::vector<IndexEdge> edges{{0, 0}, {1, kReturnIndex}};
    auto s = solve_index_matching(edges);
    ASSERT_TRUE(s.target.has_value());
    EXPECT_EQ(*s.target, 1);
    EXPECT_EQ(s.pairs, (std::vector<std::pair<int, int>>{{0, 0}}));
    EXPECT_EQ(s.size(), 2u);
}

TEST(Matching, EmptyAndAnchorless)
{
    EXPECT_TRUE(solve_index_matching({}).empty());
    std::vector<IndexEdge> no_anchor{{0, 0}, {1, 1}};
    EXPECT_TRUE(solve_index_matching(no_anchor).empty());
    EXPECT_EQ(solve_index_matching(no_anchor).size(), 0u);
}

TEST(Matching, AnchorSourceExcludedFromPairs)
{
    // Only param 0 reaches the return; its param edge must be dropped.
    std::vector<IndexEdge> edges{{0, 0}, {0, kReturnIndex}, {1, 0}};
    auto s = solve_index_matching(edges);
    EXPECT_EQ(*s.target, 0);
    EXPECT_EQ(s.pairs, (std::vector<std::pair<int, int>>{{1, 0}}));
}

TEST(Matching, TieBreaksSmallestAnchorThenLexicographic)
{
    std::vector<IndexEdge> edges{{2, kReturnIndex}, {1, kReturnIndex}, {0, 1}, {0, 0}, {2, 0}};
    auto s = solve_index_matching(edges);
    // Anchor 1 leaves {0,2} -> {0,1}: size 3. Anchor 2 leaves {0}: size 2.
    EXPECT_EQ(*s.target, 1);
    EXPECT_EQ(s.pairs, (std::vector<std::pair<int, int>>{{0, 1}, {2, 0}}));

    std::vector<IndexEdge> sym{{0, kReturnIndex}, {1, kReturnIndex}};
    EXPECT_EQ(*solve_index_matching(sym).target, 0);

    std::vector<IndexEdge> lex{{3, kReturnIndex}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    EXPECT_EQ(solve_index_matching(lex).pairs, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
}

TEST(Matching, NeedsAugmentingPath)
{
    // Greedy on (0,0) first would block param 1; the optimum uses both.
    std::vector<IndexEdge> edges{{0, 0}, {0, 1}, {1, 0}, {2, kReturnIndex}};
    auto s = solve_index_matching(edges);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.pairs, (std::vector<std::pair<int, int>>{{0, 1}, {1, 0}}));
}

TEST(Matching, EqualsExhaustiveOracle)
{
    std::mt19937 rng(20240611);
    for (int k = 0; k < 2000; ++k) {
        auto edges = random_instance(rng);
        auto s = solve_index_matching(edges);
        auto oe = to_oracle(edges);
        ASSERT_EQ(static_cast<int>(s.size()), oracle::best_subset_size(oe)) << "instance " << k;
        ASSERT_TRUE(oracle::feasible(oe, chosen(s))) << "instance " << k;
        ASSERT_TRUE(std::is_sorted(s.pairs.begin(), s.pairs.end()));
    }
}

TEST(Matching, EdgeLevelFormForIntentStack)
{
    auto g = build_graph(testsupport::intent_stack(), "android.content.Intent");
    auto edges = candidate_edges(g, testsupport::mid("android.content.Intent", "putStringArrayListExtra",
                                                     {"java.lang.String", "java.util.ArrayList<java.lang.String>"}),
                                 testsupport::mid("android.content.Intent", "getStringArrayListExtra",
                                                  {"java.lang.String"}));
    auto sel = solve_matching(edges);
    ASSERT_EQ(sel.size(), 2u);
    EXPECT_EQ(sel[0].kind, EdgeKind::param_param);
    EXPECT_EQ(sel[1].kind, EdgeKind::param_return);
    EXPECT_EQ(sel[1].from.index, 1);
    EXPECT_TRUE(solve_matching({}).empty());
}
