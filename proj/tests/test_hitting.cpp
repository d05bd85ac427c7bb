#include <gtest/gtest.h>

#include "support.hpp"

using namespace ihs;

namespace {

LevelSpace uniformSpace(std::size_t m, std::vector<Cost> levels)
{
    return LevelSpace(std::vector<std::vector<Cost>>(m, levels));
}

}  // namespace

TEST(MinCostHV, NoCoresGivesBaseline)
{
    LevelSpace s({{1, 2}, {0, 5}, {3}});
    std::vector<CostVector> none;
    EXPECT_EQ(minCostHV(HittingProblem(s, none)), (CostVector{1, 0, 3}));
}

TEST(MinCostHV, TwoCrossingCores)
{
    auto s = uniformSpace(2, {0, 1, 2});
    std::vector<CostVector> k{{1, 0}, {0, 1}};
    auto h = minCostHV(HittingProblem(s, k));
    EXPECT_EQ(cost(h), 2u);
    EXPECT_TRUE(hits(h, k));
    EXPECT_EQ(testing_support::enumeratedMhv(s, k), 2u);
}

TEST(MinCostHV, ChainOfCores)
{
    auto s = uniformSpace(2, {0, 1, 2, 3});
    std::vector<CostVector> k{{1, 0}, {2, 0}};
    EXPECT_EQ(minCostHV(HittingProblem(s, k)), (CostVector{0, 1}));
}

TEST(MinCostHV, UnhittableCoreThrows)
{
    auto s = uniformSpace(2, {0, 1});
    std::vector<CostVector> k{{1, 1}};
    HittingProblem p(s, k);
    EXPECT_TRUE(p.hasUnhittableCore());
    EXPECT_THROW(minCostHV(p), Unhittable);
    EXPECT_THROW(greedyHV(p), Unhittable);
    EXPECT_EQ(costBoundedHV(p, std::nullopt), std::nullopt);
}

TEST(CostBoundedHV, Examples)
{
    auto s = uniformSpace(2, {0, 1, 2});
    std::vector<CostVector> none;
    EXPECT_EQ(costBoundedHV(HittingProblem(s, none), std::nullopt), (CostVector{0, 0}));

    std::vector<CostVector> k{{1, 0}, {0, 1}};
    HittingProblem p(s, k);
    EXPECT_EQ(costBoundedHV(p, Cost{2}), std::nullopt);
    auto h = costBoundedHV(p, Cost{3});
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ(cost(*h), 2u);
    EXPECT_TRUE(hits(*h, k));
}

TEST(GreedyHV, Examples)
{
    auto s3 = uniformSpace(2, {0, 1, 2});
    std::vector<CostVector> none;
    EXPECT_EQ(greedyHV(HittingProblem(s3, none)), (CostVector{0, 0}));

    std::vector<CostVector> one{{1, 0}};
    EXPECT_EQ(greedyHV(HittingProblem(s3, one)), (CostVector{0, 1}));

    // raising c1 to 2 hits (1,0) and (1,1) and (0,2): ratio 2/3 beats c2 -> 3 (3/3)
    auto s4 = uniformSpace(2, {0, 1, 2, 3});
    std::vector<CostVector> three{{1, 0}, {1, 1}, {0, 2}};
    EXPECT_EQ(greedyHV(HittingProblem(s4, three)), (CostVector{2, 0}));
}

TEST(DisjointCoreBound, IsALowerBound)
{
    SplitMix64 rng(61);
    for (int i = 0; i < 300; ++i) {
        auto s = testing_support::randomLevelSpace(rng, 5, 4);
        auto k = testing_support::randomCores(rng, s, 6);
        HittingProblem p(s, k);
        auto mhv = testing_support::enumeratedMhv(s, k);
        ASSERT_TRUE(mhv.has_value());
        EXPECT_LE(disjointCoreBound(p), *mhv);
        EXPECT_GE(disjointCoreBound(p), cost(s.baseline()));
    }
}

TEST(HittingSolvers, AgreeWithEnumeration)
{
    SplitMix64 rng(62);
    for (int i = 0; i < 400; ++i) {
        auto s = testing_support::randomLevelSpace(rng, 6, 4);
        auto k = testing_support::randomCores(rng, s, 8);
        HittingProblem p(s, k);
        const Cost best = *testing_support::enumeratedMhv(s, k);

        auto h = minCostHV(p);
        EXPECT_TRUE(s.contains(h));
        EXPECT_TRUE(testing_support::hitsAll(h, k));
        EXPECT_EQ(cost(h), best);

        auto g = greedyHV(p);
        EXPECT_TRUE(s.contains(g));
        EXPECT_TRUE(testing_support::hitsAll(g, k));
        EXPECT_GE(cost(g), best);

        for (Cost ub : {best, best + 1, best + 5, Cost{0}}) {
            auto b = costBoundedHV(p, ub);
            EXPECT_EQ(b.has_value(), best < ub);
            if (b) {
                EXPECT_LT(cost(*b), ub);
                EXPECT_TRUE(testing_support::hitsAll(*b, k));
            }
        }
        auto any = costBoundedHV(p, std::nullopt);
        ASSERT_TRUE(any.has_value());
        EXPECT_TRUE(testing_support::hitsAll(*any, k));
    }
}

TEST(HittingSolvers, MinCostIsDeterministicAndLexSmallest)
{
    SplitMix64 rng(63);
    for (int i = 0; i < 200; ++i) {
        auto s = testing_support::randomLevelSpace(rng, 4, 4);
        auto k = testing_support::randomCores(rng, s, 6);
        HittingProblem p(s, k);
        const Cost best = *testing_support::enumeratedMhv(s, k);
        std::optional<CostVector> lexFirst;
        testing_support::forEachVector(s, [&](const CostVector& v) {
            if (cost(v) == best && testing_support::hitsAll(v, k) && (!lexFirst || v < *lexFirst)) lexFirst = v;
        });
        EXPECT_EQ(minCostHV(p), *lexFirst);
        EXPECT_EQ(minCostHV(p), minCostHV(p));
    }
}

TEST(HittingSolvers, DeadlineStopsSearch)
{
    SplitMix64 rng(64);
    LevelSpace s(std::vector<std::vector<Cost>>(40, {0, 1, 2, 3, 4, 5}));
    std::vector<CostVector> k;
    for (int j = 0; j < 120; ++j) {
        std::vector<Cost> v(40);
        for (auto& x : v) x = rng.uniformBelow(6);
        v[rng.uniformBelow(40)] = 0;
        k.emplace_back(std::move(v));
    }
    HittingProblem p(s, k);
    Deadline past = Deadline::after(0.0);
    EXPECT_THROW(minCostHV(p, past), Interrupted);
}
