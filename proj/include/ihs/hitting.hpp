#pragma once

// Hitting vectors over a set of cores.
//
// A vector h hits core k iff h_i > k_i for some component i. Since only the
// smallest level above k_i matters for that, every core is reduced to its
// witness levels: witness(k, i) = index of the first level above k_i, or
// none when k_i is already the maximum. The exact engines run a depth-first
// branch and bound that picks the unhit core with the fewest usable
// witnesses and branches on raising one of its components to the witness
// level. Sibling branches forbid the components tried before them from
// reaching their witness, so no vector is enumerated twice.

#include <limits>
#include <optional>
#include <span>

#include "ihs/level_space.hpp"
#include "ihs/model.hpp"

namespace ihs {

class Unhittable : public std::logic_error {
public:
    Unhittable() : std::logic_error("a core sits at the maximum level in every component") {}
};

class HittingProblem {
public:
    static constexpr int kNone = -1;

    /// `space` must outlive the problem.
    HittingProblem(const LevelSpace& space, std::span<const CostVector> cores) : space_(space)
    {
        cores_.assign(cores.begin(), cores.end());
        witness_.resize(cores_.size());
        for (std::size_t k = 0; k < cores_.size(); ++k) {
            if (cores_[k].size() != space_.size()) throw std::invalid_argument("core length does not match the space");
            witness_[k].resize(space_.size());
            for (std::size_t i = 0; i < space_.size(); ++i) {
                std::size_t idx = space_.indexOf(i, cores_[k][i]);
                witness_[k][i] = idx + 1 < space_.levelCount(i) ? static_cast<int>(idx + 1) : kNone;
            }
        }
    }

    HittingProblem(const LevelSpace& space, const CoreSet& cores) : HittingProblem(space, std::span(cores.cores())) {}

    const LevelSpace& space() const { return space_; }
    std::size_t numCores() const { return cores_.size(); }
    const CostVector& core(std::size_t k) const { return cores_[k]; }

    /// Level index of the smallest level above core k's value in component i.
    int witness(std::size_t k, std::size_t i) const { return witness_[k][i]; }

    std::optional<Cost> witnessLevel(std::size_t k, std::size_t i) const
    {
        int w = witness_[k][i];
        if (w == kNone) return std::nullopt;
        return space_.levels(i)[static_cast<std::size_t>(w)];
    }

    bool hasUnhittableCore() const
    {
        for (const auto& row : witness_)
            if (std::all_of(row.begin(), row.end(), [](int w) { return w == kNone; })) return true;
        return false;
    }

    CostVector toVector(std::span<const std::size_t> idx) const
    {
        std::vector<Cost> v(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) v[i] = space_.levels(i)[idx[i]];
        return CostVector(std::move(v));
    }

    std::vector<std::size_t> toIndices(const CostVector& v) const
    {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = space_.indexOf(i, v[i]);
        return idx;
    }

private:
    const LevelSpace& space_;
    std::vector<CostVector> cores_;
    std::vector<std::vector<int>> witness_;
};

namespace detail {

__extension__ using Wide = unsigned __int128;


/// Search state shared by the greedy and branch-and-bound engines.
class HittingState {
public:
    explicit HittingState(const HittingProblem& p)
        : p_(p), h_(p.space().size(), 0), cap_(p.space().size()), hitCount_(p.numCores(), 0), occ_(p.space().size())
    {
        for (std::size_t i = 0; i < cap_.size(); ++i) {
            cap_[i] = p.space().levelCount(i) - 1;
            cost_ += p.space().minLevel(i);
        }
        for (std::size_t k = 0; k < p.numCores(); ++k)
            for (std::size_t i = 0; i < cap_.size(); ++i)
                if (p.witness(k, i) != HittingProblem::kNone) occ_[i].push_back({k, static_cast<std::size_t>(p.witness(k, i))});
    }

    const std::vector<std::size_t>& h() const { return h_; }
    Cost cost() const { return cost_; }
    bool isHit(std::size_t k) const { return hitCount_[k] > 0; }
    std::size_t cap(std::size_t i) const { return cap_[i]; }
    void setCap(std::size_t i, std::size_t c) { cap_[i] = c; }

    Cost delta(std::size_t i, std::size_t to) const { return p_.space().levels(i)[to] - p_.space().levels(i)[h_[i]]; }

    /// Moves component i to level index `to`, keeping hit counters exact.
    void set(std::size_t i, std::size_t to)
    {
        const std::size_t from = h_[i];
        if (to == from) return;
        cost_ = cost_ - p_.space().levels(i)[from] + p_.space().levels(i)[to];
        for (auto [k, w] : occ_[i]) {
            bool before = w <= from, after = w <= to;
            if (before != after) after ? ++hitCount_[k] : --hitCount_[k];
        }
        h_[i] = to;
    }

    /// Components through which unhit core k can still be hit under the caps.
    template <class F>
    void forEachUsableWitness(std::size_t k, F&& f) const
    {
        for (std::size_t i = 0; i < h_.size(); ++i) {
            int w = p_.witness(k, i);
            if (w != HittingProblem::kNone && static_cast<std::size_t>(w) <= cap_[i]) f(i, static_cast<std::size_t>(w));
        }
    }

private:
    const HittingProblem& p_;
    std::vector<std::size_t> h_;
    std::vector<std::size_t> cap_;
    std::vector<std::size_t> hitCount_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> occ_;  // per component: (core, witness)
    Cost cost_ = 0;
};

/// Lower bound on the extra cost needed to hit all unhit cores: cheapest
/// usable increment summed over a greedy set of unhit cores whose usable
/// components are pairwise disjoint.
inline Cost disjointBound(const HittingProblem& p, const HittingState& s, std::vector<char>& used)
{
    struct Entry {
        Cost cheapest;
        std::size_t core;
    };
    std::vector<Entry> entries;
    for (std::size_t k = 0; k < p.numCores(); ++k) {
        if (s.isHit(k)) continue;
        Cost best = std::numeric_limits<Cost>::max();
        s.forEachUsableWitness(k, [&](std::size_t i, std::size_t w) { best = std::min(best, s.delta(i, w)); });
        entries.push_back({best, k});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.cheapest != b.cheapest ? a.cheapest > b.cheapest : a.core < b.core;
    });
    used.assign(s.h().size(), 0);
    Cost bound = 0;
    for (const auto& e : entries) {
        if (e.cheapest == std::numeric_limits<Cost>::max()) continue;
        bool disjoint = true;
        s.forEachUsableWitness(e.core, [&](std::size_t i, std::size_t) { disjoint = disjoint && !used[i]; });
        if (!disjoint) continue;
        s.forEachUsableWitness(e.core, [&](std::size_t i, std::size_t) { used[i] = 1; });
        bound += e.cheapest;
    }
    return bound;
}

class BranchAndBound {
public:
    BranchAndBound(const HittingProblem& p, const Deadline& deadline) : p_(p), state_(p), deadline_(deadline) {}

    /// Minimum-cost hitter, lexicographically smallest among ties. `incumbent`
    /// must hit every core.
    CostVector minimize(const CostVector& incumbent)
    {
        decision_ = false;
        best_ = p_.toIndices(incumbent);
        bestCost_ = ihs::cost(incumbent);
        dfs();
        return p_.toVector(best_);
    }

    /// Any hitter with cost < ub (no bound when ub is empty).
    std::optional<CostVector> findBelow(std::optional<Cost> ub)
    {
        decision_ = true;
        ub_ = ub;
        found_ = false;
        dfs();
        if (!found_) return std::nullopt;
        return p_.toVector(best_);
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool lexGreaterThanBest() const { return state_.h() > best_; }

    void dfs()
    {
        if ((++nodes_ & 1023) == 0) deadline_.check();

        std::size_t chosen = SIZE_MAX, fewest = SIZE_MAX;
        for (std::size_t k = 0; k < p_.numCores(); ++k) {
            if (state_.isHit(k)) continue;
            std::size_t usable = 0;
            state_.forEachUsableWitness(k, [&](std::size_t, std::size_t) { ++usable; });
            if (usable == 0) return;  // this branch can no longer hit k
            if (usable < fewest) {
                fewest = usable;
                chosen = k;
            }
        }

        const Cost c = state_.cost();
        if (chosen == SIZE_MAX) {
            if (decision_) {
                if (!ub_ || c < *ub_) {
                    found_ = true;
                    best_ = state_.h();
                }
            } else if (c < bestCost_ || (c == bestCost_ && state_.h() < best_)) {
                bestCost_ = c;
                best_ = state_.h();
            }
            return;
        }

        const Cost lb = c + disjointBound(p_, state_, used_);
        if (decision_) {
            if (ub_ && lb >= *ub_) return;
        } else if (lb > bestCost_ || (lb == bestCost_ && lexGreaterThanBest())) {
            return;
        }

        struct Branch {
            Cost delta;
            std::size_t comp;
            std::size_t level;
        };
        std::vector<Branch> branches;
        state_.forEachUsableWitness(chosen, [&](std::size_t i, std::size_t w) { branches.push_back({state_.delta(i, w), i, w}); });
        std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
            return a.delta != b.delta ? a.delta < b.delta : a.comp < b.comp;
        });

        std::vector<std::size_t> savedCaps;
        savedCaps.reserve(branches.size());
        for (const auto& b : branches) savedCaps.push_back(state_.cap(b.comp));

        for (const auto& b : branches) {
            const std::size_t from = state_.h()[b.comp];
            state_.set(b.comp, b.level);
            dfs();
            state_.set(b.comp, from);
            if (found_) break;
            state_.setCap(b.comp, b.level - 1);
        }
        for (std::size_t j = 0; j < branches.size(); ++j) state_.setCap(branches[j].comp, savedCaps[j]);
    }

    const HittingProblem& p_;
    HittingState state_;
    const Deadline& deadline_;
    bool decision_ = false;
    std::optional<Cost> ub_;
    bool found_ = false;
    std::vector<std::size_t> best_;
    Cost bestCost_ = 0;
    std::vector<char> used_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Greedy hitting vector: starting from the baseline, repeatedly apply the
/// raise (component i to the witness level of some unhit core) with the
/// lowest cost increase per newly hit core. Ties: smaller increase, then
/// smaller component, then smaller level.
inline CostVector greedyHV(const HittingProblem& p)
{
    if (p.hasUnhittableCore()) throw Unhittable();
    detail::HittingState s(p);
    const std::size_t m = p.space().size();
    std::vector<std::vector<std::size_t>> perComp(m);
    for (;;) {
        for (auto& v : perComp) v.clear();
        bool anyUnhit = false;
        for (std::size_t k = 0; k < p.numCores(); ++k) {
            if (s.isHit(k)) continue;
            anyUnhit = true;
            for (std::size_t i = 0; i < m; ++i)
                if (p.witness(k, i) != HittingProblem::kNone) perComp[i].push_back(static_cast<std::size_t>(p.witness(k, i)));
        }
        if (!anyUnhit) break;

        bool have = false;
        Cost bestDelta = 0;
        std::size_t bestHits = 0, bestComp = 0, bestLevel = 0;
        for (std::size_t i = 0; i < m; ++i) {
            auto& ws = perComp[i];
            std::sort(ws.begin(), ws.end());
            for (std::size_t j = 0; j < ws.size(); ++j) {
                if (j + 1 < ws.size() && ws[j + 1] == ws[j]) continue;  // count all cores with witness <= ws[j]
                const std::size_t hitsHere = j + 1;
                const Cost d = s.delta(i, ws[j]);
                bool better = !have;
                if (have) {
                    // d / hitsHere < bestDelta / bestHits
                    auto lhs = static_cast<detail::Wide>(d) * bestHits;
                    auto rhs = static_cast<detail::Wide>(bestDelta) * hitsHere;
                    better = lhs < rhs || (lhs == rhs && d < bestDelta);
                }
                if (better) {
                    have = true;
                    bestDelta = d;
                    bestHits = hitsHere;
                    bestComp = i;
                    bestLevel = ws[j];
                }
            }
        }
        s.set(bestComp, bestLevel);
    }
    return p.toVector(s.h());
}

/// Minimum-cost vector hitting every core (lexicographically smallest among
/// equal-cost hitters).
inline CostVector minCostHV(const HittingProblem& p, const Deadline& deadline = {})
{
    if (p.hasUnhittableCore()) throw Unhittable();
    detail::BranchAndBound bb(p, deadline);
    return bb.minimize(greedyHV(p));
}

/// Some vector hitting every core with cost < ub, or nullopt when none
/// exists. An empty ub means no bound.
inline std::optional<CostVector> costBoundedHV(const HittingProblem& p, std::optional<Cost> ub, const Deadline& deadline = {})
{
    if (p.hasUnhittableCore()) return std::nullopt;
    detail::BranchAndBound bb(p, deadline);
    return bb.findBelow(ub);
}

/// The disjoint-core lower bound at the baseline vector; exposed for testing
/// the bound's admissibility.
inline Cost disjointCoreBound(const HittingProblem& p)
{
    detail::HittingState s(p);
    std::vector<char> used;
    return s.cost() + detail::disjointBound(p, s, used);
}

}  // namespace ihs
