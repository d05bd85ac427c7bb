#pragma once

// Incremental CDCL SAT solver with assumptions.
//
// Two-watched-literal propagation, first-UIP learning with local clause
// minimization, VSIDS branching with phase saving, geometric restarts and
// activity-based learnt-clause reduction. Assumptions are enqueued as the
// first decisions, in the order given; when one of them is refuted the
// solver reports the assumptions the refutation depends on.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "ihs/random.hpp"
#include "ihs/types.hpp"

namespace ihs::sat {

using Var = std::uint32_t;

class Lit {
public:
    constexpr Lit() = default;
    constexpr Lit(Var v, bool negated) : code_(2 * v + (negated ? 1u : 0u)) {}

    static constexpr Lit fromCode(std::uint32_t code)
    {
        Lit l;
        l.code_ = code;
        return l;
    }

    constexpr Var var() const { return code_ >> 1; }
    constexpr bool negated() const { return code_ & 1u; }
    constexpr std::uint32_t code() const { return code_; }
    constexpr Lit operator~() const { return fromCode(code_ ^ 1u); }
    constexpr auto operator<=>(const Lit&) const = default;

private:
    std::uint32_t code_ = 0;
};

inline constexpr Lit pos(Var v) { return Lit(v, false); }
inline constexpr Lit neg(Var v) { return Lit(v, true); }

struct SatResult {
    bool satisfiable = false;
    std::vector<bool> model;        ///< one truth value per variable when satisfiable
    std::vector<Lit> failedAssumptions;  ///< subset of the assumptions when unsatisfiable
};

struct SolverOptions {
    double varDecay = 0.95;
    double clauseDecay = 0.999;
    std::uint64_t restartFirst = 100;
    double restartGrowth = 1.5;
    double learntFraction = 1.0 / 3.0;
    double learntGrowth = 1.1;
    double randomVarFreq = 0.0;
    std::uint64_t seed = 91648253;
};

struct SolverStats {
    std::uint64_t solves = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
};

class Solver {
public:
    explicit Solver(SolverOptions opts = {}) : opts_(opts), rng_(opts.seed) {}

    Var newVar()
    {
        Var v = static_cast<Var>(assigns_.size());
        assigns_.push_back(kUndef);
        level_.push_back(0);
        reason_.push_back(kNoReason);
        activity_.push_back(0.0);
        polarity_.push_back(true);  // prefer false
        seen_.push_back(0);
        watches_.emplace_back();
        watches_.emplace_back();
        heapIndex_.push_back(-1);
        heapInsert(v);
        return v;
    }

    std::size_t numVars() const { return assigns_.size(); }
    std::size_t numClauses() const { return numProblem_; }
    const SolverStats& stats() const { return stats_; }
    bool okay() const { return ok_; }

    void setDeadline(Deadline d) { deadline_ = d; }

    /// Adds a clause permanently. Returns false once the clause set is known
    /// to be unsatisfiable. Variables are created on demand.
    bool addClause(std::span<const Lit> lits)
    {
        if (!ok_) return false;
        assert(decisionLevel() == 0);
        std::vector<Lit> c(lits.begin(), lits.end());
        for (Lit l : c)
            while (l.var() >= numVars()) newVar();
        std::sort(c.begin(), c.end());
        std::vector<Lit> kept;
        Lit prev = Lit::fromCode(UINT32_MAX);
        for (Lit l : c) {
            if (value(l) == kTrue || l == ~prev) return true;  // satisfied or tautology
            if (value(l) != kFalse && l != prev) kept.push_back(l);
            prev = l;
        }
        if (kept.empty()) return ok_ = false;
        if (kept.size() == 1) {
            enqueue(kept[0], kNoReason);
            return ok_ = (propagate() == kNoReason);
        }
        CRef cr = allocClause(std::move(kept), false);
        attach(cr);
        ++numProblem_;
        return true;
    }

    bool addClause(std::initializer_list<Lit> lits) { return addClause(std::span<const Lit>(lits.begin(), lits.size())); }

    SatResult solve(std::span<const Lit> assumptions = {})
    {
        ++stats_.solves;
        SatResult res;
        if (!ok_) return res;
        for (Lit a : assumptions)
            while (a.var() >= numVars()) newVar();
        assumptions_.assign(assumptions.begin(), assumptions.end());
        conflict_.clear();

        if (maxLearnts_ == 0) maxLearnts_ = std::max<double>(numProblem_ * opts_.learntFraction, 1000.0);
        double restartBudget = static_cast<double>(opts_.restartFirst);
        int status = kUndefStatus;
        while (status == kUndefStatus) {
            status = search(static_cast<std::uint64_t>(restartBudget));
            restartBudget *= opts_.restartGrowth;
            if (status == kUndefStatus) ++stats_.restarts;
        }
        if (status == kSatStatus) {
            res.satisfiable = true;
            res.model.resize(numVars());
            for (Var v = 0; v < numVars(); ++v) res.model[v] = assigns_[v] == kTrue;
        } else {
            res.failedAssumptions = conflict_;
        }
        cancelUntil(0);
        return res;
    }

private:
    using CRef = std::uint32_t;
    static constexpr CRef kNoReason = UINT32_MAX;
    static constexpr std::uint8_t kTrue = 0, kFalse = 1, kUndef = 2;
    static constexpr int kUndefStatus = 0, kSatStatus = 1, kUnsatStatus = 2;

    struct Clause {
        std::vector<Lit> lits;
        double activity = 0;
        bool learnt = false;
        bool deleted = false;
    };

    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    std::uint8_t value(Lit l) const
    {
        std::uint8_t a = assigns_[l.var()];
        return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ static_cast<std::uint8_t>(l.negated()));
    }

    int decisionLevel() const { return static_cast<int>(trailLim_.size()); }

    CRef allocClause(std::vector<Lit> lits, bool learnt)
    {
        CRef cr;
        if (!freeSlots_.empty()) {
            cr = freeSlots_.back();
            freeSlots_.pop_back();
            clauses_[cr] = Clause{std::move(lits), 0, learnt, false};
        } else {
            cr = static_cast<CRef>(clauses_.size());
            clauses_.push_back(Clause{std::move(lits), 0, learnt, false});
        }
        return cr;
    }

    void attach(CRef cr)
    {
        const auto& c = clauses_[cr].lits;
        watches_[(~c[0]).code()].push_back({cr, c[1]});
        watches_[(~c[1]).code()].push_back({cr, c[0]});
    }

    void enqueue(Lit p, CRef from)
    {
        assigns_[p.var()] = p.negated() ? kFalse : kTrue;
        level_[p.var()] = decisionLevel();
        reason_[p.var()] = from;
        trail_.push_back(p);
    }

    CRef propagate()
    {
        CRef confl = kNoReason;
        while (qhead_ < trail_.size()) {
            Lit p = trail_[qhead_++];
            ++stats_.propagations;
            auto& ws = watches_[p.code()];
            std::size_t i = 0, j = 0;
            const Lit falseLit = ~p;
            while (i < ws.size()) {
                Watcher w = ws[i++];
                if (value(w.blocker) == kTrue) {
                    ws[j++] = w;
                    continue;
                }
                auto& c = clauses_[w.cref].lits;
                if (c[0] == falseLit) std::swap(c[0], c[1]);
                Lit first = c[0];
                if (first != w.blocker && value(first) == kTrue) {
                    ws[j++] = {w.cref, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (value(c[k]) != kFalse) {
                        std::swap(c[1], c[k]);
                        watches_[(~c[1]).code()].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {w.cref, first};
                if (value(first) == kFalse) {
                    confl = w.cref;
                    qhead_ = trail_.size();
                    while (i < ws.size()) ws[j++] = ws[i++];
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(j);
        }
        return confl;
    }

    void cancelUntil(int lvl)
    {
        if (decisionLevel() <= lvl) return;
        for (std::size_t c = trail_.size(); c-- > static_cast<std::size_t>(trailLim_[lvl]);) {
            Var x = trail_[c].var();
            assigns_[x] = kUndef;
            polarity_[x] = trail_[c].negated();
            if (heapIndex_[x] < 0) heapInsert(x);
        }
        trail_.resize(trailLim_[lvl]);
        qhead_ = trail_.size();
        trailLim_.resize(lvl);
    }

    // --- VSIDS heap -------------------------------------------------------

    bool heapLess(Var a, Var b) const { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); }

    void heapUp(std::size_t i)
    {
        Var v = heap_[i];
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (!heapLess(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            heapIndex_[heap_[i]] = static_cast<int>(i);
            i = parent;
        }
        heap_[i] = v;
        heapIndex_[v] = static_cast<int>(i);
    }

    void heapDown(std::size_t i)
    {
        Var v = heap_[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= heap_.size()) break;
            if (child + 1 < heap_.size() && heapLess(heap_[child + 1], heap_[child])) ++child;
            if (!heapLess(heap_[child], v)) break;
            heap_[i] = heap_[child];
            heapIndex_[heap_[i]] = static_cast<int>(i);
            i = child;
        }
        heap_[i] = v;
        heapIndex_[v] = static_cast<int>(i);
    }

    void heapInsert(Var v)
    {
        heapIndex_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heapUp(heap_.size() - 1);
    }

    Var heapPop()
    {
        Var top = heap_.front();
        heap_.front() = heap_.back();
        heapIndex_[heap_.front()] = 0;
        heap_.pop_back();
        heapIndex_[top] = -1;
        if (!heap_.empty()) heapDown(0);
        return top;
    }

    void bumpVar(Var v)
    {
        if ((activity_[v] += varInc_) > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            varInc_ *= 1e-100;
        }
        if (heapIndex_[v] >= 0) heapUp(static_cast<std::size_t>(heapIndex_[v]));
    }

    void bumpClause(Clause& c)
    {
        if ((c.activity += clauseInc_) > 1e20) {
            for (auto& cl : clauses_)
                if (cl.learnt) cl.activity *= 1e-20;
            clauseInc_ *= 1e-20;
        }
    }

    // --- conflict analysis ------------------------------------------------

    void analyze(CRef confl, std::vector<Lit>& learnt, int& backtrackLevel)
    {
        learnt.assign(1, Lit{});
        int pathCount = 0;
        Lit p;
        bool haveP = false;
        std::size_t index = trail_.size();
        do {
            Clause& c = clauses_[confl];
            if (c.learnt) bumpClause(c);
            for (std::size_t k = haveP ? 1 : 0; k < c.lits.size(); ++k) {
                Lit q = c.lits[k];
                Var v = q.var();
                if (!seen_[v] && level_[v] > 0) {
                    bumpVar(v);
                    seen_[v] = 1;
                    if (level_[v] >= decisionLevel())
                        ++pathCount;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[trail_[--index].var()]) {
            }
            p = trail_[index];
            haveP = true;
            confl = reason_[p.var()];
            seen_[p.var()] = 0;
            --pathCount;
        } while (pathCount > 0);
        learnt[0] = ~p;

        // local minimization: drop literals implied by the rest of the clause
        toClear_.assign(learnt.begin(), learnt.end());
        std::size_t j = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i) {
            CRef r = reason_[learnt[i].var()];
            bool redundant = r != kNoReason;
            if (redundant) {
                const auto& rc = clauses_[r].lits;
                for (std::size_t k = 1; k < rc.size(); ++k)
                    if (!seen_[rc[k].var()] && level_[rc[k].var()] > 0) {
                        redundant = false;
                        break;
                    }
            }
            if (!redundant) learnt[j++] = learnt[i];
        }
        learnt.resize(j);

        backtrackLevel = 0;
        if (learnt.size() > 1) {
            std::size_t maxI = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level_[learnt[i].var()] > level_[learnt[maxI].var()]) maxI = i;
            std::swap(learnt[1], learnt[maxI]);
            backtrackLevel = level_[learnt[1].var()];
        }
        for (Lit l : toClear_) seen_[l.var()] = 0;
    }

    /// Collects the assumptions responsible for assumption `p` being false.
    void analyzeFinal(Lit p)
    {
        conflict_.clear();
        conflict_.push_back(p);
        if (decisionLevel() == 0) return;
        seen_[p.var()] = 1;
        for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trailLim_[0]);) {
            Var x = trail_[i].var();
            if (!seen_[x]) continue;
            if (reason_[x] == kNoReason) {
                assert(level_[x] > 0);
                conflict_.push_back(trail_[i]);
            } else {
                const auto& c = clauses_[reason_[x]].lits;
                for (std::size_t k = 1; k < c.size(); ++k)
                    if (level_[c[k].var()] > 0) seen_[c[k].var()] = 1;
            }
            seen_[x] = 0;
        }
        seen_[p.var()] = 0;
        // conflict_[0] is the refuted assumption; the rest are decisions,
        // which at this point are all assumptions.
        std::sort(conflict_.begin(), conflict_.end());
        conflict_.erase(std::unique(conflict_.begin(), conflict_.end()), conflict_.end());
    }

    void reduceDb()
    {
        std::vector<CRef> learnts;
        for (CRef cr = 0; cr < clauses_.size(); ++cr)
            if (clauses_[cr].learnt && !clauses_[cr].deleted) learnts.push_back(cr);
        std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
            const auto& ca = clauses_[a];
            const auto& cb = clauses_[b];
            if ((ca.lits.size() > 2) != (cb.lits.size() > 2)) return ca.lits.size() > 2;
            if (ca.activity != cb.activity) return ca.activity < cb.activity;
            return a < b;
        });
        const double extraLim = clauseInc_ / std::max<std::size_t>(learnts.size(), 1);
        std::size_t removed = 0;
        for (std::size_t i = 0; i < learnts.size(); ++i) {
            Clause& c = clauses_[learnts[i]];
            if (c.lits.size() <= 2 || locked(learnts[i])) continue;
            if (i < learnts.size() / 2 || c.activity < extraLim) {
                c.deleted = true;
                ++removed;
            }
        }
        if (removed == 0) return;
        for (auto& ws : watches_)
            std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
        for (CRef cr = 0; cr < clauses_.size(); ++cr) {
            Clause& c = clauses_[cr];
            if (c.deleted && !c.lits.empty()) {
                c.lits.clear();
                c.lits.shrink_to_fit();
                freeSlots_.push_back(cr);
            }
        }
        numLearnts_ -= removed;
    }

    bool locked(CRef cr) const
    {
        const Lit first = clauses_[cr].lits[0];
        return value(first) == kTrue && reason_[first.var()] == cr;
    }

    Lit pickBranchLit()
    {
        Var next = UINT32_MAX;
        if (opts_.randomVarFreq > 0 && !heap_.empty() &&
            static_cast<double>(rng_.next() >> 11) * 0x1.0p-53 < opts_.randomVarFreq) {
            Var v = heap_[rng_.uniformBelow(heap_.size())];
            if (assigns_[v] == kUndef) next = v;
        }
        while (next == UINT32_MAX || assigns_[next] != kUndef) {
            if (heap_.empty()) return Lit::fromCode(UINT32_MAX);
            next = heapPop();
        }
        return Lit(next, polarity_[next]);
    }

    int search(std::uint64_t conflictBudget)
    {
        std::uint64_t conflicts = 0;
        std::vector<Lit> learnt;
        for (;;) {
            CRef confl = propagate();
            if (confl != kNoReason) {
                ++stats_.conflicts;
                ++conflicts;
                if (decisionLevel() == 0) {
                    ok_ = false;
                    return kUnsatStatus;
                }
                int btLevel = 0;
                analyze(confl, learnt, btLevel);
                cancelUntil(btLevel);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    CRef cr = allocClause(learnt, true);
                    attach(cr);
                    bumpClause(clauses_[cr]);
                    ++numLearnts_;
                    enqueue(learnt[0], cr);
                }
                varInc_ /= opts_.varDecay;
                clauseInc_ /= opts_.clauseDecay;
                if ((stats_.conflicts & 255) == 0) deadline_.check();
                continue;
            }
            if (conflicts >= conflictBudget) {
                cancelUntil(0);
                return kUndefStatus;
            }
            if (static_cast<double>(numLearnts_) - static_cast<double>(trail_.size()) >= maxLearnts_) {
                reduceDb();
                maxLearnts_ *= opts_.learntGrowth;
            }

            Lit next = Lit::fromCode(UINT32_MAX);
            while (decisionLevel() < static_cast<int>(assumptions_.size())) {
                Lit a = assumptions_[decisionLevel()];
                if (value(a) == kTrue) {
                    trailLim_.push_back(static_cast<int>(trail_.size()));  // dummy level
                } else if (value(a) == kFalse) {
                    analyzeFinal(a);
                    return kUnsatStatus;
                } else {
                    next = a;
                    break;
                }
            }
            if (next.code() == UINT32_MAX) {
                ++stats_.decisions;
                next = pickBranchLit();
                if (next.code() == UINT32_MAX) return kSatStatus;
            }
            trailLim_.push_back(static_cast<int>(trail_.size()));
            enqueue(next, kNoReason);
        }
    }

    SolverOptions opts_;
    SplitMix64 rng_;
    Deadline deadline_;
    bool ok_ = true;

    std::vector<Clause> clauses_;
    std::vector<CRef> freeSlots_;
    std::size_t numProblem_ = 0;
    std::size_t numLearnts_ = 0;
    double maxLearnts_ = 0;

    std::vector<std::vector<Watcher>> watches_;
    std::vector<std::uint8_t> assigns_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<double> activity_;
    std::vector<bool> polarity_;  // saved phase: true means negated
    std::vector<std::uint8_t> seen_;
    std::vector<Var> heap_;
    std::vector<int> heapIndex_;

    std::vector<Lit> trail_;
    std::vector<int> trailLim_;
    std::size_t qhead_ = 0;

    std::vector<Lit> assumptions_;
    std::vector<Lit> conflict_;
    std::vector<Lit> toClear_;

    double varInc_ = 1.0;
    double clauseInc_ = 1.0;
    SolverStats stats_;
};

}  // namespace ihs::sat
