#pragma once

// Core improvement: turn a core h into a core k >= h by raising components
// one level at a time while the induced CSP stays unsatisfiable. All
// strategies start from the lazy core the oracle reports for h and always
// raise the candidate component with the lowest current value (smaller
// index on ties). They differ only in when they stop:
//
//   lazy          no raises at all
//   cost-bounded  once cost(k) >= ub
//   partial-max   at the first raise that turns out satisfiable
//   maximal       when no component can be raised any more
//
// Satisfiable probes are solutions; any that beats the upper bound is
// reported back.

#include <optional>
#include <string_view>

#include "ihs/csp_oracle.hpp"

namespace ihs {

enum class CoreStrategy { Lazy, CostBounded, PartialMax, Maximal };

inline std::string_view toString(CoreStrategy s)
{
    switch (s) {
    case CoreStrategy::Lazy: return "lazy";
    case CoreStrategy::CostBounded: return "cost-bounded";
    case CoreStrategy::PartialMax: return "partial-max";
    case CoreStrategy::Maximal: return "maximal";
    }
    return "?";
}

inline std::optional<CoreStrategy> parseCoreStrategy(std::string_view s)
{
    for (auto c : {CoreStrategy::Lazy, CoreStrategy::CostBounded, CoreStrategy::PartialMax, CoreStrategy::Maximal})
        if (toString(c) == s) return c;
    return std::nullopt;
}

/// A feasible assignment found along the way; `cost` is the cost of its
/// component vector (instance offset excluded).
struct FoundSolution {
    Cost cost = 0;
    Assignment assignment;
    CostVector vector;
};

struct ImproveOutcome {
    CostVector core;
    std::optional<FoundSolution> newUb;
    std::uint64_t probes = 0;
};

/// Improves `lazyCore` (a core produced by the oracle) according to
/// `strategy`. `ub` is the current upper bound, empty when none is known.
inline ImproveOutcome improveCore(CoreStrategy strategy, CspOracle& oracle, CostVector lazyCore, std::optional<Cost> ub)
{
    const LevelSpace& space = oracle.space();
    ImproveOutcome out;
    out.core = std::move(lazyCore);
    if (strategy == CoreStrategy::Lazy) return out;

    const std::optional<Cost> stopAt = ub;  // solutions found while probing do not move the stop bound
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (!space.atMax(i, out.core[i])) candidates.push_back(i);

    while (!candidates.empty()) {
        if (strategy == CoreStrategy::CostBounded && stopAt && cost(out.core) >= *stopAt) break;

        auto pick = std::min_element(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            return out.core[a] != out.core[b] ? out.core[a] < out.core[b] : a < b;
        });
        const std::size_t i = *pick;
        CostVector probe = out.core;
        probe[i] = space.nextLevel(i, probe[i]);
        InducedResult r = oracle.solveInduced(probe);
        ++out.probes;
        if (!r.satisfiable) {
            out.core = std::move(probe);
            if (space.atMax(i, out.core[i])) candidates.erase(pick);
            continue;
        }
        candidates.erase(pick);
        const Cost c = cost(r.solution);
        if (!ub || c < *ub) {
            ub = c;
            out.newUb = FoundSolution{c, std::move(r.assignment), std::move(r.solution)};
        }
        if (strategy == CoreStrategy::PartialMax) break;
    }
    return out;
}

namespace detail {

inline CostVector lazyCoreOf(CspOracle& oracle, const CostVector& h)
{
    InducedResult r = oracle.solveInduced(h);
    if (r.satisfiable) throw std::logic_error("core improvement called on a solution vector");
    return std::move(r.lazyCore);
}

}  // namespace detail

inline ImproveOutcome improveLazy(CspOracle& oracle, const CostVector& h)
{
    return improveCore(CoreStrategy::Lazy, oracle, detail::lazyCoreOf(oracle, h), std::nullopt);
}

inline ImproveOutcome improveCostBounded(CspOracle& oracle, const CostVector& h, std::optional<Cost> ub)
{
    return improveCore(CoreStrategy::CostBounded, oracle, detail::lazyCoreOf(oracle, h), ub);
}

inline ImproveOutcome improvePartialMaximal(CspOracle& oracle, const CostVector& h)
{
    return improveCore(CoreStrategy::PartialMax, oracle, detail::lazyCoreOf(oracle, h), std::nullopt);
}

inline ImproveOutcome improveMaximal(CspOracle& oracle, const CostVector& h)
{
    return improveCore(CoreStrategy::Maximal, oracle, detail::lazyCoreOf(oracle, h), std::nullopt);
}

}  // namespace ihs
