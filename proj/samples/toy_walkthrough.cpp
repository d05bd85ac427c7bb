// Builds a small WCSP by hand, solves it with every configuration, and prints
// the bound trace of one IHS-lb run.

#include <iostream>

#include "ihs/ihs.hpp"

int main()
{
    using namespace ihs;

    // three variables on a path; y must differ from both neighbours
    std::vector<Value> domains{3, 3, 3};
    HardConstraint left{{0, 1}, {{0, 0}, {1, 1}, {2, 2}}};
    HardConstraint right{{1, 2}, {{0, 0}, {1, 1}, {2, 2}}};
    CostFunction fx({0}, 4, {{{0}, 0}, {{1}, 2}});
    CostFunction fy({1}, 0, {{{0}, 3}});
    CostFunction fxz({0, 2}, 1, {{{0, 0}, 6}, {{2, 2}, 0}});
    WcspInstance w("path", domains, {left, right}, {fx, fy, fxz}, 100);

    std::cout << writeWcsp(w) << '\n';
    std::cout << "brute force optimum: " << *bruteForceOptimum(w, 1000) << "\n\n";

    for (auto hv : {HvStrategy::Lb, HvStrategy::Ub, HvStrategy::GrdLb, HvStrategy::GrdUb})
        for (auto core : {CoreStrategy::Lazy, CoreStrategy::CostBounded, CoreStrategy::PartialMax, CoreStrategy::Maximal})
            for (bool merge : {false, true}) {
                SolverConfig cfg;
                cfg.hv = hv;
                cfg.core = core;
                cfg.merge = merge;
                auto r = solve(w, cfg);
                std::cout << toString(hv) << '/' << toString(core) << '/' << (merge ? "merged" : "plain")
                          << ": optimum " << *r.optimum << ", iterations " << r.iterations << ", |K| "
                          << r.coreSetSize << '\n';
            }

    SolverConfig cfg;
    cfg.core = CoreStrategy::Lazy;
    auto r = solve(w, cfg);
    std::cout << "\nIHS-lb with lazy cores, per-iteration bounds:\n";
    for (std::size_t i = 0; i < r.boundsTrace.size(); ++i) {
        const auto& p = r.boundsTrace[i];
        std::cout << "  " << i + 1 << ": lb " << p.lb << ", ub " << (p.ub ? std::to_string(*p.ub) : "inf") << '\n';
    }
    std::cout << "cores:";
    for (const auto& k : r.cores) {
        std::cout << " (";
        for (std::size_t i = 0; i < k.size(); ++i) std::cout << (i ? "," : "") << k[i];
        std::cout << ')';
    }
    std::cout << '\n';
}
