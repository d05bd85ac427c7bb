#pragma once

#include <optional>

#include "ihs/model.hpp"

namespace ihs {

/// Exhaustive optimum over all assignments (offset included); nullopt when
/// no assignment is feasible. Throws std::length_error when the search space
/// exceeds `limit` assignments.
inline std::optional<Cost> bruteForceOptimum(const WcspInstance& w, std::uint64_t limit)
{
    std::uint64_t space = 1;
    for (Value d : w.domains()) {
        if (space > limit / d) throw std::length_error("brute force: assignment space exceeds cap");
        space *= d;
    }

    struct Table {
        const std::vector<VarId>* scope;
        TupleIndexer ix;
        std::vector<Cost> costs;  // top marks forbidden
    };
    std::vector<Table> tables;
    for (const auto& h : w.hardConstraints()) {
        Table t{&h.scope, TupleIndexer(h.scope, w.domains()), {}};
        t.costs.assign(t.ix.count(), 0);
        for (const auto& tu : h.forbidden) t.costs[t.ix.index(tu)] = w.top();
        tables.push_back(std::move(t));
    }
    for (const auto& f : w.costFunctions()) {
        TupleIndexer ix(f.scope(), w.domains());
        tables.push_back(Table{&f.scope(), ix, f.denseTable(w.domains())});
    }

    std::optional<Cost> best;
    Assignment a{std::vector<Value>(w.numVars(), 0)};
    for (std::uint64_t step = 0; step < space; ++step) {
        Cost total = 0;
        bool feasible = true;
        for (const auto& t : tables) {
            Cost c = t.costs[t.ix.indexOf(*t.scope, a)];
            if (c >= w.top()) {
                feasible = false;
                break;
            }
            total += c;
        }
        if (feasible && (!best || total < *best)) best = total;
        // odometer, last variable fastest
        for (std::size_t x = w.numVars(); x-- > 0;) {
            if (++a.values[x] < w.domains()[x]) break;
            a.values[x] = 0;
        }
    }
    if (best) *best += w.offset();
    return best;
}

}  // namespace ihs
