#include <gtest/gtest.h>

#include "support.hpp"

using namespace ihs;

TEST(MinFill, TriangleHasNoFill)
{
    Graph g(3);
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    g.addEdge(0, 2);
    auto e = minFillOrder(g);
    EXPECT_EQ(e.fillEdges, 0u);
    EXPECT_EQ(e.order, (std::vector<VarId>{0, 1, 2}));
    EXPECT_EQ(e.clusters.front(), (std::vector<VarId>{0, 1, 2}));
}

TEST(MinFill, StarEliminatesLeavesFirst)
{
    Graph g(5);
    for (VarId leaf = 1; leaf <= 4; ++leaf) g.addEdge(0, leaf);
    auto e = minFillOrder(g);
    EXPECT_EQ(e.fillEdges, 0u);
    EXPECT_EQ(e.order, (std::vector<VarId>{1, 2, 3, 0, 4}));
    for (std::size_t p = 0; p < 3; ++p) EXPECT_EQ(e.clusters[p].size(), 2u);
}

TEST(MinFill, CycleNeedsOneFillEdge)
{
    Graph g(4);
    g.addEdge(0, 1);
    g.addEdge(1, 2);
    g.addEdge(2, 3);
    g.addEdge(3, 0);
    auto e = minFillOrder(g);
    EXPECT_EQ(e.fillEdges, 1u);
    EXPECT_EQ(e.clusters[0], (std::vector<VarId>{0, 1, 3}));
}

TEST(MinFill, EmptyGraphGivesSingletons)
{
    auto e = minFillOrder(Graph(3));
    EXPECT_EQ(e.order, (std::vector<VarId>{0, 1, 2}));
    for (const auto& c : e.clusters) EXPECT_EQ(c.size(), 1u);
}

TEST(BuildMerged, SameScopeFunctionsMerge)
{
    CostFunction f1({0, 1}, 0, {{{0, 1}, 2}, {{1, 1}, 5}});
    CostFunction f2({0, 1}, 1, {{{1, 0}, 3}});
    WcspInstance w("s", {2, 2}, {}, {f1, f2}, 100);
    auto m = buildMerged(w, 4);
    ASSERT_EQ(m.size(), 1u);
    const auto& c = m.components()[0];
    EXPECT_EQ(c.members, (std::vector<std::size_t>{0, 1}));
    // (0,0): 0+1, (0,1): 2+1, (1,0): 0+3, (1,1): 5+1
    EXPECT_EQ(c.table, (std::vector<Cost>{1, 3, 3, 6}));
    EXPECT_EQ(c.levels, (std::vector<Cost>{1, 3, 6}));
    EXPECT_EQ(m.capFallbacks(), 0u);

    auto capped = buildMerged(w, 3);
    EXPECT_EQ(capped.size(), 2u);
    EXPECT_EQ(capped.capFallbacks(), 1u);
}

TEST(BuildMerged, DisjointScopesStaySingletons)
{
    CostFunction f1({0}, 0, {{{1}, 2}});
    CostFunction f2({1, 2}, 0, {{{1, 1}, 3}});
    WcspInstance w("d", {2, 2, 2}, {}, {f1, f2}, 100);
    auto m = buildMerged(w);
    EXPECT_EQ(m.clusters(), (std::vector<std::vector<std::size_t>>{{0}, {1}}));
}

TEST(BuildMerged, CapOneIsUnmerged)
{
    auto w = testing_support::suiteInstance(4);
    auto m = buildMerged(w, 1);
    auto u = unmerged(w);
    EXPECT_EQ(m.clusters(), u.clusters());
    EXPECT_THROW(buildMerged(w, 0), std::invalid_argument);
}

TEST(BuildMerged, PartitionAndSumDecomposition)
{
    SplitMix64 rng(9);
    for (std::uint64_t k = 0; k < 60; ++k) {
        auto w = k % 2 ? testing_support::suiteInstance(k) : testing_support::randomSmallInstance(rng, 7, 3, 8);
        for (std::size_t cap : {std::size_t{8}, std::size_t{64}, kDefaultMergeCap}) {
            auto m = buildMerged(w, cap);
            EXPECT_LE(m.size(), w.numFunctions());
            std::vector<int> seen(w.numFunctions(), 0);
            for (const auto& c : m.clusters())
                for (auto f : c) ++seen[f];
            for (int s : seen) EXPECT_EQ(s, 1);

            for (int a = 0; a < 1000; ++a) {
                Assignment x{std::vector<Value>(w.numVars())};
                for (VarId v = 0; v < w.numVars(); ++v) x.values[v] = static_cast<Value>(rng.uniformBelow(w.domains()[v]));
                Cost direct = 0;
                for (const auto& f : w.costFunctions()) direct += f.costAt(x);
                auto parts = m.componentCosts(x);
                EXPECT_EQ(cost(parts), direct);
                for (std::size_t i = 0; i < m.size(); ++i) {
                    const auto& lv = m.components()[i].levels;
                    EXPECT_TRUE(std::binary_search(lv.begin(), lv.end(), parts[i]));
                }
            }
        }
    }
}

TEST(BuildMerged, PreservesOptimumAndSatisfiability)
{
    SplitMix64 rng(10);
    for (int i = 0; i < 40; ++i) {
        auto w = testing_support::randomSmallInstance(rng, 5, 3, 5);
        auto m = buildMerged(w);
        CspOracle o(m);
        auto feasible = o.solveInduced(o.space().maxVector()).satisfiable;
        EXPECT_EQ(feasible, bruteForceOptimum(w, 1u << 20).has_value());
    }
}
