#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ihs/types.hpp"

namespace ihs {

/// Mixed-radix indexing of the tuples of a scope. Tuple (a_1..a_r) maps to
/// a_1 * (d_2 * ... * d_r) + ... + a_r, so the last variable varies fastest.
class TupleIndexer {
public:
    TupleIndexer() = default;

    TupleIndexer(std::span<const VarId> scope, std::span<const Value> domains)
    {
        radix_.reserve(scope.size());
        for (VarId x : scope) radix_.push_back(domains[x]);
        count_ = 1;
        for (Value d : radix_) {
            if (d != 0 && count_ > kMaxTuples / d)
                throw std::length_error("scope has too many tuples to enumerate");
            count_ *= d;
        }
    }

    static constexpr std::size_t kMaxTuples = std::size_t{1} << 26;

    std::size_t count() const { return count_; }
    std::size_t arity() const { return radix_.size(); }

    std::size_t index(std::span<const Value> tuple) const
    {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < radix_.size(); ++j) idx = idx * radix_[j] + tuple[j];
        return idx;
    }

    /// Index of the scope tuple selected by a full assignment.
    std::size_t indexOf(std::span<const VarId> scope, const Assignment& a) const
    {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < radix_.size(); ++j) idx = idx * radix_[j] + a[scope[j]];
        return idx;
    }

    std::vector<Value> tuple(std::size_t idx) const
    {
        std::vector<Value> t(radix_.size());
        for (std::size_t j = radix_.size(); j-- > 0;) {
            t[j] = static_cast<Value>(idx % radix_[j]);
            idx /= radix_[j];
        }
        return t;
    }

private:
    std::vector<Value> radix_;
    std::size_t count_ = 1;
};

using Tuple = std::vector<Value>;

struct HardConstraint {
    std::vector<VarId> scope;
    std::set<Tuple> forbidden;
};

/// A cost function stored as a default cost plus explicitly listed tuples.
///
/// levels() is the sorted set of distinct costs the table mentions (the
/// default included). Callers may supply a larger level set explicitly, as
/// long as it contains every cost the table mentions.
class CostFunction {
public:
    CostFunction() = default;

    CostFunction(std::vector<VarId> scope, Cost defaultCost, std::map<Tuple, Cost> tuples = {},
                 std::vector<Cost> levels = {})
        : scope_(std::move(scope)), default_(defaultCost), tuples_(std::move(tuples))
    {
        std::vector<Cost> mentioned{default_};
        for (const auto& [t, c] : tuples_) {
            if (t.size() != scope_.size())
                throw std::invalid_argument("cost function tuple arity does not match its scope");
            mentioned.push_back(c);
        }
        std::sort(mentioned.begin(), mentioned.end());
        mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
        if (levels.empty()) {
            levels_ = std::move(mentioned);
            return;
        }
        if (!std::is_sorted(levels.begin(), levels.end()) ||
            std::adjacent_find(levels.begin(), levels.end()) != levels.end())
            throw std::invalid_argument("cost function levels must be strictly increasing");
        for (Cost c : mentioned)
            if (!std::binary_search(levels.begin(), levels.end(), c))
                throw std::invalid_argument("cost function level set misses cost " +
                                            std::to_string(c));
        levels_ = std::move(levels);
    }

    const std::vector<VarId>& scope() const { return scope_; }
    std::size_t arity() const { return scope_.size(); }
    Cost defaultCost() const { return default_; }
    const std::map<Tuple, Cost>& tuples() const { return tuples_; }
    const std::vector<Cost>& levels() const { return levels_; }
    Cost minLevel() const { return levels_.front(); }
    Cost maxLevel() const { return levels_.back(); }

    Cost costOf(const Tuple& tuple) const
    {
        auto it = tuples_.find(tuple);
        return it == tuples_.end() ? default_ : it->second;
    }

    Cost costAt(const Assignment& a) const
    {
        Tuple t(scope_.size());
        for (std::size_t j = 0; j < scope_.size(); ++j) t[j] = a[scope_[j]];
        return costOf(t);
    }

    /// Dense cost table in TupleIndexer order.
    std::vector<Cost> denseTable(std::span<const Value> domains) const
    {
        TupleIndexer ix(scope_, domains);
        std::vector<Cost> table(ix.count(), default_);
        for (const auto& [t, c] : tuples_) table[ix.index(t)] = c;
        return table;
    }

private:
    std::vector<VarId> scope_;
    Cost default_ = 0;
    std::map<Tuple, Cost> tuples_;
    std::vector<Cost> levels_{0};
};

/// A weighted CSP (X, C, F). Domain values of variable x are 0..domains[x]-1.
/// `offset` is a constant added to every solution cost (folded constant
/// functions); it is not part of any cost vector.
class WcspInstance {
public:
    WcspInstance() = default;

    WcspInstance(std::string name, std::vector<Value> domains, std::vector<HardConstraint> hard,
                 std::vector<CostFunction> functions, Cost top, Cost offset = 0)
        : name_(std::move(name)),
          domains_(std::move(domains)),
          hard_(std::move(hard)),
          functions_(std::move(functions)),
          top_(top),
          offset_(offset)
    {
        validate();
    }

    const std::string& name() const { return name_; }
    std::size_t numVars() const { return domains_.size(); }
    const std::vector<Value>& domains() const { return domains_; }
    const std::vector<HardConstraint>& hardConstraints() const { return hard_; }
    const std::vector<CostFunction>& costFunctions() const { return functions_; }
    std::size_t numFunctions() const { return functions_.size(); }
    Cost top() const { return top_; }
    Cost offset() const { return offset_; }

private:
    void checkScope(const std::vector<VarId>& scope) const
    {
        std::set<VarId> seen;
        for (VarId x : scope) {
            if (x >= domains_.size()) throw std::invalid_argument("scope variable out of range");
            if (!seen.insert(x).second) throw std::invalid_argument("scope repeats a variable");
        }
    }

    void checkTuple(const std::vector<VarId>& scope, const Tuple& t) const
    {
        if (t.size() != scope.size()) throw std::invalid_argument("tuple arity mismatch");
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t[j] >= domains_[scope[j]]) throw std::invalid_argument("tuple value out of domain");
    }

    void validate() const
    {
        if (top_ < 1) throw std::invalid_argument("top must be at least 1");
        for (Value d : domains_)
            if (d == 0) throw std::invalid_argument("empty domain");
        for (const auto& h : hard_) {
            checkScope(h.scope);
            for (const auto& t : h.forbidden) checkTuple(h.scope, t);
        }
        for (const auto& f : functions_) {
            checkScope(f.scope());
            if (f.maxLevel() >= top_) throw std::invalid_argument("cost function cost reaches top");
            for (const auto& [t, c] : f.tuples()) checkTuple(f.scope(), t);
        }
    }

    std::string name_;
    std::vector<Value> domains_;
    std::vector<HardConstraint> hard_;
    std::vector<CostFunction> functions_;
    Cost top_ = 1;
    Cost offset_ = 0;
};

inline Cost cost(const CostVector& v)
{
    Cost total = 0;
    for (Cost c : v) total += c;
    return total;
}

/// True iff v dominates u, i.e. u <= v componentwise.
inline bool dominates(const CostVector& v, const CostVector& u)
{
    if (v.size() != u.size()) throw std::invalid_argument("dominates: vector length mismatch");
    for (std::size_t i = 0; i < v.size(); ++i)
        if (u[i] > v[i]) return false;
    return true;
}

/// Set of mutually non-dominated cores. Inserting a vector drops the members
/// it dominates; a vector already dominated by a member is rejected.
class CoreSet {
public:
    bool insert(const CostVector& k)
    {
        for (const auto& c : cores_)
            if (dominates(c, k)) return false;
        std::erase_if(cores_, [&](const CostVector& c) { return dominates(k, c); });
        cores_.push_back(k);
        return true;
    }

    std::size_t size() const { return cores_.size(); }
    bool empty() const { return cores_.empty(); }
    const std::vector<CostVector>& cores() const { return cores_; }
    auto begin() const { return cores_.begin(); }
    auto end() const { return cores_.end(); }

private:
    std::vector<CostVector> cores_;
};

/// h hits K iff every core of K is exceeded by h in some component.
template <class Cores>
bool hits(const CostVector& h, const Cores& cores)
{
    for (const CostVector& k : cores) {
        assert(k.size() == h.size());
        bool exceeded = false;
        for (std::size_t i = 0; i < h.size() && !exceeded; ++i) exceeded = h[i] > k[i];
        if (!exceeded) return false;
    }
    return true;
}

/// The members of `vectors` not dominated by any other member; duplicates
/// collapse to one representative. Input order is preserved.
inline std::vector<CostVector> maximalSubset(const std::vector<CostVector>& vectors)
{
    std::vector<CostVector> out;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < vectors.size() && keep; ++j) {
            if (i == j || !dominates(vectors[j], vectors[i])) continue;
            // equal vectors: keep only the first occurrence
            keep = vectors[j] == vectors[i] && j > i;
        }
        if (keep) out.push_back(vectors[i]);
    }
    return out;
}

struct Evaluation {
    bool feasible = false;
    CostVector solutionVector;
    Cost totalCost = 0;  // sum of function costs, excluding the instance offset
};

inline bool violatesHard(const WcspInstance& w, const Assignment& a)
{
    for (const auto& h : w.hardConstraints()) {
        Tuple t(h.scope.size());
        for (std::size_t j = 0; j < h.scope.size(); ++j) t[j] = a[h.scope[j]];
        if (h.forbidden.contains(t)) return true;
    }
    return false;
}

inline Evaluation evaluate(const WcspInstance& w, const Assignment& a)
{
    if (a.size() != w.numVars()) throw std::invalid_argument("evaluate: partial assignment");
    Evaluation e;
    e.feasible = !violatesHard(w, a);
    std::vector<Cost> sv;
    sv.reserve(w.numFunctions());
    for (const auto& f : w.costFunctions()) {
        Cost c = f.costAt(a);
        if (c >= w.top()) e.feasible = false;
        sv.push_back(c);
        e.totalCost += c;
    }
    e.solutionVector = CostVector(std::move(sv));
    return e;
}

}  // namespace ihs
