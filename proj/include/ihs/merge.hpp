#pragma once

// Cost-function merging. Cost functions are clustered along a min-fill
// elimination order of the primal graph and every cluster whose joint scope
// is small enough is replaced by one materialized function (the sum of its
// members). The IHS loop then works over one vector component per cluster.

#include <map>
#include <set>

#include "ihs/level_space.hpp"
#include "ihs/model.hpp"

namespace ihs {

/// Undirected graph over variables 0..n-1.
struct Graph {
    std::vector<std::set<VarId>> adj;

    explicit Graph(std::size_t n = 0) : adj(n) {}
    std::size_t size() const { return adj.size(); }
    void addEdge(VarId a, VarId b)
    {
        if (a == b) return;
        adj[a].insert(b);
        adj[b].insert(a);
    }
};

/// One edge per pair of variables sharing a cost-function scope.
inline Graph primalGraph(const WcspInstance& w)
{
    Graph g(w.numVars());
    for (const auto& f : w.costFunctions())
        for (std::size_t a = 0; a < f.arity(); ++a)
            for (std::size_t b = a + 1; b < f.arity(); ++b) g.addEdge(f.scope()[a], f.scope()[b]);
    return g;
}

struct EliminationOrder {
    std::vector<VarId> order;
    /// clusters[p] = order[p] plus its neighbours at elimination time, sorted.
    std::vector<std::vector<VarId>> clusters;
    std::size_t fillEdges = 0;
};

/// Greedy min-fill elimination; ties go to the lowest vertex index.
inline EliminationOrder minFillOrder(Graph g)
{
    const std::size_t n = g.size();
    EliminationOrder out;
    std::vector<bool> gone(n, false);
    auto fillOf = [&](VarId v) {
        std::size_t fill = 0;
        const auto& nb = g.adj[v];
        for (auto a = nb.begin(); a != nb.end(); ++a)
            for (auto b = std::next(a); b != nb.end(); ++b)
                if (!g.adj[*a].contains(*b)) ++fill;
        return fill;
    };
    for (std::size_t step = 0; step < n; ++step) {
        VarId best = 0;
        std::size_t bestFill = SIZE_MAX;
        for (VarId v = 0; v < n; ++v) {
            if (gone[v]) continue;
            std::size_t f = fillOf(v);
            if (f < bestFill) {
                bestFill = f;
                best = v;
            }
        }
        std::vector<VarId> cluster(g.adj[best].begin(), g.adj[best].end());
        cluster.push_back(best);
        std::sort(cluster.begin(), cluster.end());
        for (auto a = g.adj[best].begin(); a != g.adj[best].end(); ++a)
            for (auto b = std::next(a); b != g.adj[best].end(); ++b) g.addEdge(*a, *b);
        for (VarId u : g.adj[best]) g.adj[u].erase(best);
        g.adj[best].clear();
        gone[best] = true;
        out.order.push_back(best);
        out.clusters.push_back(std::move(cluster));
        out.fillEdges += bestFill;
    }
    return out;
}

/// A (possibly merged) cost function: dense table over `scope` in
/// TupleIndexer order, plus its level set.
struct CostComponent {
    std::vector<VarId> scope;
    std::vector<Cost> table;
    std::vector<Cost> levels;
    std::vector<std::size_t> members;  ///< indices into base().costFunctions()

    Cost costAt(const Assignment& a, std::span<const Value> domains) const
    {
        return table[TupleIndexer(scope, domains).indexOf(scope, a)];
    }
};

/// The vector space the IHS loop runs in: the base instance plus a partition
/// of its cost functions into components.
class MergedProblem {
public:
    MergedProblem() = default;
    MergedProblem(WcspInstance base, std::vector<CostComponent> components, std::size_t capFallbacks = 0)
        : base_(std::move(base)), components_(std::move(components)), capFallbacks_(capFallbacks)
    {
    }

    const WcspInstance& base() const { return base_; }
    const std::vector<CostComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    /// Clusters that exceeded the materialization cap and were left unmerged.
    std::size_t capFallbacks() const { return capFallbacks_; }

    LevelSpace levelSpace() const
    {
        std::vector<std::vector<Cost>> levels;
        levels.reserve(components_.size());
        for (const auto& c : components_) levels.push_back(c.levels);
        return LevelSpace(std::move(levels));
    }

    CostVector componentCosts(const Assignment& a) const
    {
        std::vector<Cost> v;
        v.reserve(components_.size());
        for (const auto& c : components_) v.push_back(c.costAt(a, base_.domains()));
        return CostVector(std::move(v));
    }

    std::vector<std::vector<std::size_t>> clusters() const
    {
        std::vector<std::vector<std::size_t>> out;
        for (const auto& c : components_) out.push_back(c.members);
        return out;
    }

private:
    WcspInstance base_;
    std::vector<CostComponent> components_;
    std::size_t capFallbacks_ = 0;
};

namespace detail {

inline CostComponent singletonComponent(const WcspInstance& w, std::size_t i)
{
    const auto& f = w.costFunctions()[i];
    return CostComponent{f.scope(), f.denseTable(w.domains()), f.levels(), {i}};
}

}  // namespace detail

/// Every cost function as its own component.
inline MergedProblem unmerged(const WcspInstance& w)
{
    std::vector<CostComponent> comps;
    comps.reserve(w.numFunctions());
    for (std::size_t i = 0; i < w.numFunctions(); ++i) comps.push_back(detail::singletonComponent(w, i));
    return MergedProblem(w, std::move(comps));
}

inline constexpr std::size_t kDefaultMergeCap = 4096;

/// Assigns each cost function to the smallest elimination cluster containing
/// its scope (earliest cluster on ties) and materializes every group whose
/// joint scope has at most `cap` assignments. Larger groups stay unmerged;
/// cap 1 disables merging altogether.
inline MergedProblem buildMerged(const WcspInstance& w, std::size_t cap = kDefaultMergeCap)
{
    if (cap < 1) throw std::invalid_argument("merge cap must be at least 1");
    if (cap == 1) return unmerged(w);
    const auto elim = minFillOrder(primalGraph(w));

    std::map<std::size_t, std::vector<std::size_t>> groups;  // cluster position -> functions
    for (std::size_t i = 0; i < w.numFunctions(); ++i) {
        const auto& scope = w.costFunctions()[i].scope();
        std::size_t best = SIZE_MAX;
        for (std::size_t p = 0; p < elim.clusters.size(); ++p) {
            const auto& cl = elim.clusters[p];
            bool covers = std::all_of(scope.begin(), scope.end(),
                                      [&](VarId x) { return std::binary_search(cl.begin(), cl.end(), x); });
            if (covers && (best == SIZE_MAX || cl.size() < elim.clusters[best].size())) best = p;
        }
        if (best == SIZE_MAX) throw std::logic_error("no elimination cluster covers a cost-function scope");
        groups[best].push_back(i);
    }

    // components ordered by their smallest member function
    std::vector<std::vector<std::size_t>> ordered;
    for (auto& [p, members] : groups) ordered.push_back(std::move(members));
    std::sort(ordered.begin(), ordered.end());

    std::vector<CostComponent> comps;
    std::size_t fallbacks = 0;
    for (const auto& members : ordered) {
        if (members.size() == 1) {
            comps.push_back(detail::singletonComponent(w, members[0]));
            continue;
        }
        std::set<VarId> scopeSet;
        for (std::size_t i : members)
            for (VarId x : w.costFunctions()[i].scope()) scopeSet.insert(x);
        std::vector<VarId> scope(scopeSet.begin(), scopeSet.end());

        std::uint64_t count = 1;
        bool fits = true;
        for (VarId x : scope) {
            count *= w.domains()[x];
            if (count > cap) {
                fits = false;
                break;
            }
        }
        if (!fits) {
            ++fallbacks;
            for (std::size_t i : members) comps.push_back(detail::singletonComponent(w, i));
            continue;
        }

        TupleIndexer ix(scope, w.domains());
        CostComponent comp{scope, std::vector<Cost>(ix.count(), 0), {}, members};
        Assignment a{std::vector<Value>(w.numVars(), 0)};
        for (std::size_t idx = 0; idx < ix.count(); ++idx) {
            Tuple t = ix.tuple(idx);
            for (std::size_t j = 0; j < scope.size(); ++j) a.values[scope[j]] = t[j];
            Cost sum = 0;
            for (std::size_t i : members) sum += w.costFunctions()[i].costAt(a);
            comp.table[idx] = sum;
        }
        comp.levels = comp.table;
        std::sort(comp.levels.begin(), comp.levels.end());
        comp.levels.erase(std::unique(comp.levels.begin(), comp.levels.end()), comp.levels.end());
        comps.push_back(std::move(comp));
    }
    // keep the component order stable even when fallbacks split a group
    std::stable_sort(comps.begin(), comps.end(),
                     [](const CostComponent& a, const CostComponent& b) { return a.members.front() < b.members.front(); });
    return MergedProblem(w, std::move(comps), fallbacks);
}

}  // namespace ihs
