#pragma once

// CNF encoding of the CSPs induced by cost vectors.
//
// Variable x taking value a is the literal value(x, a) (direct encoding with
// an exactly-one constraint per variable). Component i with levels
// l_0 < ... < l_{L-1} gets selectors s_0..s_{L-2}, s_j meaning "cost of
// component i <= l_j", chained s_j -> s_{j+1}. A tuple whose cost is l_j
// (j >= 1) is excluded by the single clause (~s_{j-1} | ~tuple); the chain
// makes it excluded under every tighter bound as well. Bounding the vector
// by v means assuming s_{index(v_i)} for every component below its max.

#include "ihs/level_space.hpp"
#include "ihs/merge.hpp"
#include "ihs/sat/solver.hpp"

namespace ihs {

struct EncodingOptions {
    /// Domains at least this large use a sequential-counter at-most-one
    /// instead of the pairwise one.
    std::size_t sequentialAmoFrom = SIZE_MAX;
    sat::SolverOptions sat;
};

/// Outcome of solving the CSP induced by a cost vector v.
struct InducedResult {
    bool satisfiable = false;
    Assignment assignment;  ///< decoded model (satisfiable only)
    CostVector solution;    ///< component costs of the model, <= v
    CostVector lazyCore;    ///< v on components in the failed assumptions, max elsewhere (unsatisfiable only)
};

/// Owns the encoding of one MergedProblem and the incremental SAT solver all
/// induced-CSP queries of a run go through. The problem must outlive the
/// oracle.
class CspOracle {
public:
    explicit CspOracle(const MergedProblem& problem, EncodingOptions opts = {})
        : problem_(problem), space_(problem.levelSpace()), solver_(opts.sat)
    {
        encode(opts);
    }

    CspOracle(const CspOracle&) = delete;
    CspOracle& operator=(const CspOracle&) = delete;

    const MergedProblem& problem() const { return problem_; }
    const LevelSpace& space() const { return space_; }
    std::uint64_t calls() const { return calls_; }
    const sat::Solver& solver() const { return solver_; }
    void setDeadline(Deadline d) { solver_.setDeadline(d); }

    sat::Lit valueLit(VarId x, Value a) const { return sat::pos(valueVar_[x] + a); }
    /// Selector "component i costs at most levels(i)[j]", j < levelCount(i) - 1.
    sat::Lit selector(std::size_t i, std::size_t j) const { return sat::pos(selectorVar_[i] + static_cast<sat::Var>(j)); }

    InducedResult solveInduced(const CostVector& v)
    {
        if (!space_.contains(v)) throw std::invalid_argument("solveInduced: vector outside the level space");
        ++calls_;
        std::vector<sat::Lit> assumptions;
        for (std::size_t i = 0; i < space_.size(); ++i) {
            std::size_t j = space_.indexOf(i, v[i]);
            if (j + 1 < space_.levelCount(i)) assumptions.push_back(selector(i, j));
        }
        sat::SatResult r = solver_.solve(assumptions);

        InducedResult out;
        out.satisfiable = r.satisfiable;
        if (r.satisfiable) {
            const auto& w = problem_.base();
            out.assignment.values.assign(w.numVars(), 0);
            for (VarId x = 0; x < w.numVars(); ++x)
                for (Value a = 0; a < w.domains()[x]; ++a)
                    if (r.model[valueVar_[x] + a]) {
                        out.assignment.values[x] = a;
                        break;
                    }
            out.solution = problem_.componentCosts(out.assignment);
            return out;
        }
        std::vector<bool> involved(space_.size(), false);
        for (sat::Lit l : r.failedAssumptions) involved[componentOf_[l.var() - firstSelector_]] = true;
        std::vector<Cost> core(space_.size());
        for (std::size_t i = 0; i < space_.size(); ++i) core[i] = involved[i] ? v[i] : space_.maxLevel(i);
        out.lazyCore = CostVector(std::move(core));
        return out;
    }

private:
    void exactlyOne(const std::vector<sat::Lit>& lits, const EncodingOptions& opts)
    {
        solver_.addClause(lits);
        if (lits.size() >= opts.sequentialAmoFrom) {
            // Sinz sequential counter: r_k means "some of lits[0..k] is true"
            std::vector<sat::Lit> reg;
            for (std::size_t k = 0; k + 1 < lits.size(); ++k) reg.push_back(sat::pos(solver_.newVar()));
            for (std::size_t k = 0; k + 1 < lits.size(); ++k) {
                solver_.addClause({~lits[k], reg[k]});
                if (k > 0) {
                    solver_.addClause({~reg[k - 1], reg[k]});
                    solver_.addClause({~lits[k], ~reg[k - 1]});
                }
            }
            solver_.addClause({~lits.back(), ~reg.back()});
            return;
        }
        for (std::size_t a = 0; a < lits.size(); ++a)
            for (std::size_t b = a + 1; b < lits.size(); ++b) solver_.addClause({~lits[a], ~lits[b]});
    }

    void encode(const EncodingOptions& opts)
    {
        const auto& w = problem_.base();
        valueVar_.resize(w.numVars());
        for (VarId x = 0; x < w.numVars(); ++x) {
            valueVar_[x] = static_cast<sat::Var>(solver_.numVars());
            for (Value a = 0; a < w.domains()[x]; ++a) solver_.newVar();
        }
        // selectors are allocated contiguously so failed assumptions map back to components
        firstSelector_ = static_cast<sat::Var>(solver_.numVars());
        selectorVar_.resize(space_.size());
        for (std::size_t i = 0; i < space_.size(); ++i) {
            selectorVar_[i] = static_cast<sat::Var>(solver_.numVars());
            for (std::size_t j = 0; j + 1 < space_.levelCount(i); ++j) {
                solver_.newVar();
                componentOf_.push_back(i);
            }
        }

        for (VarId x = 0; x < w.numVars(); ++x) {
            std::vector<sat::Lit> lits;
            for (Value a = 0; a < w.domains()[x]; ++a) lits.push_back(valueLit(x, a));
            exactlyOne(lits, opts);
        }

        std::vector<sat::Lit> clause;
        for (const auto& h : w.hardConstraints()) {
            for (const auto& t : h.forbidden) {
                clause.clear();
                for (std::size_t j = 0; j < t.size(); ++j) clause.push_back(~valueLit(h.scope[j], t[j]));
                solver_.addClause(clause);
            }
        }

        for (std::size_t i = 0; i < space_.size(); ++i) {
            const auto& comp = problem_.components()[i];
            const auto& levels = comp.levels;
            for (std::size_t j = 0; j + 2 < levels.size(); ++j)
                solver_.addClause({~selector(i, j), selector(i, j + 1)});
            TupleIndexer ix(comp.scope, w.domains());
            for (std::size_t idx = 0; idx < comp.table.size(); ++idx) {
                std::size_t j = space_.indexOf(i, comp.table[idx]);
                if (j == 0) continue;
                Tuple t = ix.tuple(idx);
                clause.clear();
                clause.push_back(~selector(i, j - 1));
                for (std::size_t k = 0; k < t.size(); ++k) clause.push_back(~valueLit(comp.scope[k], t[k]));
                solver_.addClause(clause);
            }
        }
    }

    const MergedProblem& problem_;
    LevelSpace space_;
    sat::Solver solver_;
    std::vector<sat::Var> valueVar_;
    std::vector<sat::Var> selectorVar_;
    std::vector<std::size_t> componentOf_;
    sat::Var firstSelector_ = 0;
    std::uint64_t calls_ = 0;
};

}  // namespace ihs
