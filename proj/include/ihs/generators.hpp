#pragma once

#include <numeric>
#include <string>
#include <unordered_set>

#include "ihs/model.hpp"
#include "ihs/random.hpp"

namespace ihs {

/// Parameters (n, d, m, w, t) of the random binary WCSP families. For the
/// scale-free family m is the preferential-attachment parameter instead of
/// the function count.
struct GeneratorParams {
    std::uint64_t n = 0;  ///< variables
    std::uint64_t d = 0;  ///< domain size
    std::uint64_t m = 0;  ///< functions (uniform) / attachment edges per vertex (scale-free)
    std::uint64_t w = 0;  ///< distinct nonzero weights per function
    std::uint64_t t = 0;  ///< nonzero-cost tuples per function
    std::uint64_t seed = 0;
};

namespace detail {

inline void checkCommon(const GeneratorParams& p)
{
    if (p.n == 0 || p.d == 0 || p.m == 0 || p.w == 0 || p.t == 0)
        throw std::invalid_argument("generator parameters must be positive");
    if (p.t > p.d * p.d) throw std::invalid_argument("t exceeds d^2");
}

/// k distinct values from [0, n) by partial Fisher-Yates, returned sorted.
inline std::vector<std::uint64_t> sampleDistinct(SplitMix64& rng, std::uint64_t n, std::uint64_t k)
{
    std::vector<std::uint64_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::uint64_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.uniformBelow(n - i)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Binary cost function on (x, y): t tuples get a cost drawn from w distinct
/// weights in [1, 10w]; every other tuple costs 0.
inline CostFunction randomBinaryFunction(SplitMix64& rng, VarId x, VarId y, const GeneratorParams& p)
{
    const std::uint64_t universe = 10 * p.w;
    std::vector<Cost> weights(p.w);
    std::unordered_set<Cost> used;
    for (auto& wt : weights) {
        do {
            wt = rng.uniformIn(1, universe);
        } while (!used.insert(wt).second);
    }
    std::map<Tuple, Cost> tuples;
    for (std::uint64_t idx : sampleDistinct(rng, p.d * p.d, p.t)) {
        Tuple tu{static_cast<Value>(idx / p.d), static_cast<Value>(idx % p.d)};
        tuples.emplace(std::move(tu), weights[rng.uniformBelow(p.w)]);
    }
    return CostFunction({x, y}, 0, std::move(tuples));
}

inline Cost safeTop(const std::vector<CostFunction>& fs)
{
    Cost sum = 0;
    for (const auto& f : fs) sum += f.maxLevel();
    return sum + 1;
}

}  // namespace detail

/// Uniform random binary WCSP: m distinct scopes out of the n(n-1)/2 pairs.
inline WcspInstance genUniform(const GeneratorParams& p)
{
    detail::checkCommon(p);
    const std::uint64_t pairs = p.n * (p.n - 1) / 2;
    if (p.m > pairs) throw std::invalid_argument("m exceeds n(n-1)/2");
    SplitMix64 rng(p.seed);

    // pair index enumerates (0,1),(0,2),...,(0,n-1),(1,2),...
    std::vector<std::pair<VarId, VarId>> allPairs;
    allPairs.reserve(pairs);
    for (VarId x = 0; x < p.n; ++x)
        for (VarId y = x + 1; y < p.n; ++y) allPairs.emplace_back(x, y);

    std::vector<CostFunction> fs;
    for (std::uint64_t idx : detail::sampleDistinct(rng, pairs, p.m))
        fs.push_back(detail::randomBinaryFunction(rng, allPairs[idx].first, allPairs[idx].second, p));
    Cost top = detail::safeTop(fs);
    return WcspInstance("uniform_" + std::to_string(p.seed), std::vector<Value>(p.n, static_cast<Value>(p.d)), {},
                        std::move(fs), top);
}

/// Edges of a Barabasi-Albert graph: a clique on vertices 0..m, then each new
/// vertex attaches to m distinct earlier vertices drawn with probability
/// proportional to their degree before the vertex arrived.
inline std::vector<std::pair<VarId, VarId>> barabasiAlbertEdges(SplitMix64& rng, std::uint64_t n, std::uint64_t m)
{
    std::vector<std::pair<VarId, VarId>> edges;
    std::vector<std::uint64_t> degree(n, 0);
    for (VarId x = 0; x <= m; ++x)
        for (VarId y = x + 1; y <= m; ++y) {
            edges.emplace_back(x, y);
            ++degree[x];
            ++degree[y];
        }
    for (VarId v = static_cast<VarId>(m + 1); v < n; ++v) {
        std::vector<std::uint64_t> weight(degree.begin(), degree.begin() + v);
        std::uint64_t total = std::accumulate(weight.begin(), weight.end(), std::uint64_t{0});
        std::vector<VarId> targets;
        for (std::uint64_t k = 0; k < m; ++k) {
            std::uint64_t r = rng.uniformBelow(total);
            VarId u = 0;
            while (r >= weight[u]) r -= weight[u++];
            targets.push_back(u);
            total -= weight[u];
            weight[u] = 0;  // without replacement
        }
        std::sort(targets.begin(), targets.end());
        for (VarId u : targets) {
            edges.emplace_back(u, v);
            ++degree[u];
            ++degree[v];
        }
    }
    return edges;
}

/// Scale-free random binary WCSP: one cost function per Barabasi-Albert edge.
inline WcspInstance genScaleFree(const GeneratorParams& p)
{
    detail::checkCommon(p);
    if (p.m >= p.n) throw std::invalid_argument("scale-free requires m < n");
    SplitMix64 rng(p.seed);
    auto edges = barabasiAlbertEdges(rng, p.n, p.m);
    std::vector<CostFunction> fs;
    fs.reserve(edges.size());
    for (auto [x, y] : edges) fs.push_back(detail::randomBinaryFunction(rng, x, y, p));
    Cost top = detail::safeTop(fs);
    return WcspInstance("scale-free_" + std::to_string(p.seed), std::vector<Value>(p.n, static_cast<Value>(p.d)), {},
                        std::move(fs), top);
}

}  // namespace ihs
