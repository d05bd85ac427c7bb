#pragma once

// Test-only oracles. None of these reuse solver code paths: SAT is checked
// by truth tables, hitting problems by enumerating the whole level space,
// WCSP optima by a recursive enumerator, and induced CSPs by enumerating
// assignments.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ihs/ihs.hpp"

namespace testing_support {

using namespace ihs;

// ------------------------------------------------------------------ SAT

struct TinyCnf {
    std::uint32_t numVars = 0;
    std::vector<std::vector<sat::Lit>> clauses;
};

/// Random k-CNF with clause width 1..maxWidth.
inline TinyCnf randomCnf(SplitMix64& rng, std::uint32_t vars, std::size_t clauses, std::size_t maxWidth)
{
    TinyCnf f{vars, {}};
    for (std::size_t c = 0; c < clauses; ++c) {
        std::size_t width = 1 + rng.uniformBelow(maxWidth);
        std::vector<sat::Lit> cl;
        for (std::size_t k = 0; k < width; ++k)
            cl.push_back(sat::Lit(static_cast<sat::Var>(rng.uniformBelow(vars)), rng.uniformBelow(2) == 1));
        f.clauses.push_back(std::move(cl));
    }
    return f;
}

/// A satisfying bitmask under `assumptions`, by enumeration (vars <= 24).
inline std::optional<std::uint32_t> truthTable(const TinyCnf& f, std::span<const sat::Lit> assumptions = {})
{
    std::vector<std::pair<std::uint32_t, std::uint32_t>> masks;  // (positive, negative)
    for (const auto& c : f.clauses) {
        std::uint32_t p = 0, n = 0;
        for (auto l : c) (l.negated() ? n : p) |= 1u << l.var();
        masks.push_back({p, n});
    }
    for (auto l : assumptions) masks.push_back(l.negated() ? std::pair{0u, 1u << l.var()} : std::pair{1u << l.var(), 0u});
    const std::uint32_t all = f.numVars == 32 ? ~0u : (1u << f.numVars) - 1;
    for (std::uint64_t a = 0; a <= all; ++a) {
        const auto x = static_cast<std::uint32_t>(a);
        bool ok = true;
        for (auto [p, n] : masks)
            if (((x & p) | (~x & n)) == 0) {
                ok = false;
                break;
            }
        if (ok) return x;
    }
    return std::nullopt;
}

inline void loadInto(sat::Solver& s, const TinyCnf& f)
{
    while (s.numVars() < f.numVars) s.newVar();
    for (const auto& c : f.clauses) s.addClause(c);
}

// -------------------------------------------------------------- hitting

/// Every vector of the level space, in odometer order.
inline void forEachVector(const LevelSpace& space, const std::function<void(const CostVector&)>& f)
{
    const std::size_t m = space.size();
    std::vector<std::size_t> idx(m, 0);
    std::vector<Cost> v(m);
    for (;;) {
        for (std::size_t i = 0; i < m; ++i) v[i] = space.levels(i)[idx[i]];
        f(CostVector(v));
        std::size_t i = 0;
        while (i < m && ++idx[i] == space.levelCount(i)) idx[i++] = 0;
        if (i == m) return;
    }
}

inline bool hitsAll(const CostVector& h, std::span<const CostVector> cores)
{
    for (const auto& k : cores) {
        bool exceeds = false;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (h[i] > k[i]) exceeds = true;
        if (!exceeds) return false;
    }
    return true;
}

/// Minimum cost over all hitting vectors, empty when none exists.
inline std::optional<Cost> enumeratedMhv(const LevelSpace& space, std::span<const CostVector> cores)
{
    std::optional<Cost> best;
    forEachVector(space, [&](const CostVector& v) {
        if (!hitsAll(v, cores)) return;
        Cost c = 0;
        for (auto x : v) c += x;
        if (!best || c < *best) best = c;
    });
    return best;
}

inline LevelSpace randomLevelSpace(SplitMix64& rng, std::size_t maxComponents, std::size_t maxLevels)
{
    const std::size_t m = 1 + rng.uniformBelow(maxComponents);
    std::vector<std::vector<Cost>> levels;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t count = 1 + rng.uniformBelow(maxLevels);
        std::set<Cost> ls;
        while (ls.size() < count) ls.insert(rng.uniformBelow(12));
        levels.emplace_back(ls.begin(), ls.end());
    }
    return LevelSpace(std::move(levels));
}

/// Random vectors of the space other than the all-max vector.
inline std::vector<CostVector> randomCores(SplitMix64& rng, const LevelSpace& space, std::size_t maxCores)
{
    std::vector<CostVector> cores;
    const std::size_t count = rng.uniformBelow(maxCores + 1);
    for (std::size_t attempt = 0; cores.size() < count && attempt < 50; ++attempt) {
        std::vector<Cost> v(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) v[i] = space.levels(i)[rng.uniformBelow(space.levelCount(i))];
        CostVector k(std::move(v));
        if (k == space.maxVector()) continue;
        cores.push_back(std::move(k));
    }
    return cores;
}

// ----------------------------------------------------------------- WCSP

/// Optimum (offset included) by recursive enumeration, first variable
/// outermost; empty when infeasible.
inline std::optional<Cost> enumerateOptimum(const WcspInstance& w)
{
    std::optional<Cost> best;
    Assignment a{std::vector<Value>(w.numVars(), 0)};
    std::function<void(VarId)> rec = [&](VarId x) {
        if (x == w.numVars()) {
            for (const auto& h : w.hardConstraints()) {
                Tuple t;
                for (VarId y : h.scope) t.push_back(a.values[y]);
                if (h.forbidden.contains(t)) return;
            }
            Cost c = w.offset();
            for (const auto& f : w.costFunctions()) {
                Tuple t;
                for (VarId y : f.scope()) t.push_back(a.values[y]);
                auto it = f.tuples().find(t);
                c += it == f.tuples().end() ? f.defaultCost() : it->second;
            }
            if (!best || c < *best) best = c;
            return;
        }
        for (Value v = 0; v < w.domains()[x]; ++v) {
            a.values[x] = v;
            rec(x + 1);
        }
    };
    rec(0);
    return best;
}

/// Whether some feasible assignment has component costs <= v.
inline bool inducedSatisfiable(const MergedProblem& p, const CostVector& v)
{
    const auto& w = p.base();
    Assignment a{std::vector<Value>(w.numVars(), 0)};
    for (;;) {
        if (!violatesHard(w, a)) {
            const CostVector c = p.componentCosts(a);
            bool ok = true;
            for (std::size_t i = 0; i < c.size(); ++i)
                if (c[i] > v[i]) ok = false;
            if (ok) return true;
        }
        std::size_t x = 0;
        while (x < w.numVars() && ++a.values[x] == w.domains()[x]) a.values[x++] = 0;
        if (x == w.numVars()) return false;
    }
}

/// Small random instance with mixed arities, non-zero minimum levels, hard
/// constraints and an offset; meant for exhaustive checks.
inline WcspInstance randomSmallInstance(SplitMix64& rng, std::size_t maxVars, Value maxDomain, std::size_t maxFunctions,
                                        bool withHard = true)
{
    const std::size_t n = 1 + rng.uniformBelow(maxVars);
    std::vector<Value> domains(n);
    for (auto& d : domains) d = static_cast<Value>(1 + rng.uniformBelow(maxDomain));

    auto randomScope = [&](std::size_t arity) {
        std::vector<VarId> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<VarId>(i);
        for (std::size_t i = 0; i < arity; ++i) std::swap(all[i], all[i + rng.uniformBelow(n - i)]);
        all.resize(arity);
        return all;
    };

    std::vector<CostFunction> fs;
    const std::size_t m = 1 + rng.uniformBelow(maxFunctions);
    Cost maxSum = 0;
    for (std::size_t f = 0; f < m; ++f) {
        auto scope = randomScope(1 + rng.uniformBelow(std::min<std::size_t>(3, n)));
        TupleIndexer ix(scope, domains);
        const Cost def = rng.uniformBelow(3);
        std::map<Tuple, Cost> tuples;
        Cost hi = def;
        for (std::size_t idx = 0; idx < ix.count(); ++idx)
            if (rng.uniformBelow(2)) {
                Cost c = rng.uniformBelow(6);
                tuples[ix.tuple(idx)] = c;
                hi = std::max(hi, c);
            }
        maxSum += hi;
        fs.emplace_back(scope, def, tuples);
    }
    std::vector<HardConstraint> hard;
    if (withHard) {
        const std::size_t k = rng.uniformBelow(3);
        for (std::size_t c = 0; c < k; ++c) {
            auto scope = randomScope(1 + rng.uniformBelow(std::min<std::size_t>(2, n)));
            TupleIndexer ix(scope, domains);
            HardConstraint h{scope, {}};
            for (std::size_t idx = 0; idx < ix.count(); ++idx)
                if (rng.uniformBelow(4) == 0) h.forbidden.insert(ix.tuple(idx));
            hard.push_back(std::move(h));
        }
    }
    const Cost offset = rng.uniformBelow(3);
    return WcspInstance("small", domains, hard, fs, maxSum + offset + 1, offset);
}

/// Parameters inside the desk-scale envelope (n <= 10, d <= 3, m <= 15,
/// w <= 4, t <= 6), cycling through both generator families.
inline WcspInstance suiteInstance(std::uint64_t k)
{
    SplitMix64 rng(0xACCE55ULL + k * 7919);
    GeneratorParams p;
    p.seed = k;
    p.d = 2 + rng.uniformBelow(2);
    p.w = 1 + rng.uniformBelow(4);
    p.t = 1 + rng.uniformBelow(std::min<std::uint64_t>(6, p.d * p.d));
    if (k % 2 == 0) {
        p.n = 4 + rng.uniformBelow(7);
        const std::uint64_t pairs = p.n * (p.n - 1) / 2;
        p.m = 1 + rng.uniformBelow(std::min<std::uint64_t>(15, pairs));
        return genUniform(p);
    }
    p.m = 1 + rng.uniformBelow(2);
    // edges = m(m+1)/2 + m(n-m-1) must stay <= 15
    const std::uint64_t maxN = p.m == 1 ? 10 : 9;
    p.n = p.m + 2 + rng.uniformBelow(maxN - p.m - 1);
    return genScaleFree(p);
}

inline MergedProblem problemFor(const WcspInstance& w, bool merge, std::size_t cap = kDefaultMergeCap)
{
    return merge ? buildMerged(w, cap) : unmerged(w);
}

/// All 32 hv x core x merge configurations.
inline std::vector<SolverConfig> allConfigs(double timeLimit = 60.0)
{
    std::vector<SolverConfig> out;
    for (auto hv : {HvStrategy::Lb, HvStrategy::Ub, HvStrategy::GrdLb, HvStrategy::GrdUb})
        for (auto core : {CoreStrategy::Lazy, CoreStrategy::CostBounded, CoreStrategy::PartialMax, CoreStrategy::Maximal})
            for (bool merge : {false, true}) {
                SolverConfig c;
                c.hv = hv;
                c.core = core;
                c.merge = merge;
                c.timeLimit = timeLimit;
                out.push_back(c);
            }
    return out;
}

}  // namespace testing_support
