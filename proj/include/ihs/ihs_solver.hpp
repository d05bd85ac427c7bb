#pragma once

// The implicit-hitting-set loops.
//
//   lb      h := minimum-cost hitting vector of K; lb := cost(h)
//   ub      h := any hitting vector below ub; none left means lb := ub
//   grd-lb  greedy hitting vectors, with one lb-style iteration after every
//   grd-ub  greedy iteration that found nothing new (resp. ub-style)
//
// Every h is tested by solving its induced CSP: a solution tightens ub, a
// core is improved and added to K. The loops stop once lb = ub.

#include <chrono>
#include <string>

#include "ihs/core_improve.hpp"
#include "ihs/hitting.hpp"
#include "ihs/merge.hpp"

namespace ihs {

enum class HvStrategy { Lb, Ub, GrdLb, GrdUb };

inline std::string_view toString(HvStrategy s)
{
    switch (s) {
    case HvStrategy::Lb: return "lb";
    case HvStrategy::Ub: return "ub";
    case HvStrategy::GrdLb: return "grd-lb";
    case HvStrategy::GrdUb: return "grd-ub";
    }
    return "?";
}

inline std::optional<HvStrategy> parseHvStrategy(std::string_view s)
{
    for (auto h : {HvStrategy::Lb, HvStrategy::Ub, HvStrategy::GrdLb, HvStrategy::GrdUb})
        if (toString(h) == s) return h;
    return std::nullopt;
}

inline bool isLbFlavored(HvStrategy s) { return s == HvStrategy::Lb || s == HvStrategy::GrdLb; }

struct SolverConfig {
    HvStrategy hv = HvStrategy::Lb;
    CoreStrategy core = CoreStrategy::Maximal;
    bool merge = false;
    bool disjointCores = false;
    std::size_t mergeCap = kDefaultMergeCap;
    double timeLimit = 3600.0;  // seconds
    std::uint64_t seed = 0;
    std::uint64_t iterationCap = 10'000'000;
    std::size_t disjointLimit = SIZE_MAX;  ///< extra cores per disjoint phase
};

enum class RunStatus { Optimal, Timeout, Infeasible, Error };

inline std::string_view toString(RunStatus s)
{
    switch (s) {
    case RunStatus::Optimal: return "optimal";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Infeasible: return "infeasible";
    case RunStatus::Error: return "error";
    }
    return "?";
}

struct BoundsPoint {
    Cost lb = 0;
    std::optional<Cost> ub;
};

/// Outcome of one solver run. All bounds include the instance offset.
struct RunReport {
    RunStatus status = RunStatus::Error;
    std::string message;
    std::optional<Cost> optimum;
    Cost finalLb = 0;
    std::optional<Cost> finalUb;
    std::optional<Assignment> bestAssignment;

    std::uint64_t iterations = 0;
    std::uint64_t hvCalls = 0;
    std::uint64_t satCalls = 0;  ///< every induced-CSP solve, probes included
    std::uint64_t improveProbes = 0;
    std::uint64_t coresAdded = 0;    ///< vectors accepted into K over the run
    std::uint64_t coreSetSize = 0;   ///< |K| at the end
    std::size_t componentCount = 0;  ///< vector dimension (after merging)
    std::size_t mergeFallbacks = 0;

    std::vector<BoundsPoint> boundsTrace;  ///< one entry per iteration
    std::vector<CostVector> cores;          ///< K at the end
    std::vector<CostVector> insertedCores;  ///< every vector accepted into K, in order

    double hvSeconds = 0;
    double satSeconds = 0;
    double improveSeconds = 0;
    double totalSeconds = 0;
};

namespace detail {

class Stopwatch {
public:
    explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }
    Stopwatch(const Stopwatch&) = delete;
    Stopwatch& operator=(const Stopwatch&) = delete;

private:
    double& sink_;
    std::chrono::steady_clock::time_point start_;
};

class IhsRun {
public:
    IhsRun(const WcspInstance& w, const SolverConfig& cfg)
        : cfg_(cfg),
          problem_(cfg.merge ? buildMerged(w, cfg.mergeCap) : unmerged(w)),
          oracle_(problem_, encodingOptions(cfg)),
          space_(oracle_.space())
    {
    }

    RunReport run()
    {
        const auto start = std::chrono::steady_clock::now();
        deadline_ = Deadline::after(cfg_.timeLimit);
        oracle_.setDeadline(deadline_);
        report_.componentCount = problem_.size();
        report_.mergeFallbacks = problem_.capFallbacks();
        lb_ = cost(space_.baseline());
        try {
            if (!feasible()) {
                report_.status = RunStatus::Infeasible;
            } else {
                loop();
                report_.status = RunStatus::Optimal;
            }
        } catch (const Interrupted&) {
            report_.status = RunStatus::Timeout;
        } catch (const IterationCapReached&) {
            report_.status = RunStatus::Error;
            report_.message = "iteration cap exceeded";
        }
        finish();
        report_.totalSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(report_);
    }

private:
    struct IterationCapReached {};

    static EncodingOptions encodingOptions(const SolverConfig& cfg)
    {
        EncodingOptions o;
        o.sat.seed = cfg.seed ^ 0x5eed5eed5eedULL;
        return o;
    }

    bool feasible()
    {
        Stopwatch sw(report_.satSeconds);
        return oracle_.solveInduced(space_.maxVector()).satisfiable;
    }

    bool open() const { return !ub_ || lb_ < *ub_; }

    void loop()
    {
        bool forceExact = false;
        while (open()) {
            deadline_.check();
            if (++report_.iterations > cfg_.iterationCap) throw IterationCapReached{};
            switch (cfg_.hv) {
            case HvStrategy::Lb: lbIteration(); break;
            case HvStrategy::Ub: ubIteration(); break;
            case HvStrategy::GrdLb:
            case HvStrategy::GrdUb:
                if (forceExact) {
                    forceExact = false;
                    cfg_.hv == HvStrategy::GrdLb ? lbIteration() : ubIteration();
                } else {
                    forceExact = !greedyIteration();
                }
                break;
            }
            report_.boundsTrace.push_back({lb_ + offset(), ubWithOffset()});
        }
    }

    void lbIteration()
    {
        CostVector h;
        {
            Stopwatch sw(report_.hvSeconds);
            h = minCostHV(HittingProblem(space_, cores_), deadline_);
            ++report_.hvCalls;
        }
        lb_ = std::max(lb_, cost(h));
        if (!open()) return;
        test(h);
    }

    void ubIteration()
    {
        std::optional<CostVector> h;
        {
            Stopwatch sw(report_.hvSeconds);
            h = costBoundedHV(HittingProblem(space_, cores_), ub_, deadline_);
            ++report_.hvCalls;
        }
        if (!h) {
            if (!ub_) throw std::logic_error("no hitting vector although the instance is feasible");
            lb_ = *ub_;
            return;
        }
        test(*h);
    }

    /// Returns false when the iteration was useless (a solution no better
    /// than ub).
    bool greedyIteration()
    {
        CostVector h;
        {
            Stopwatch sw(report_.hvSeconds);
            h = greedyHV(HittingProblem(space_, cores_));
            ++report_.hvCalls;
        }
        return test(h);
    }

    /// Solves the CSP induced by h and acts on the answer. Returns false when
    /// h was a solution that did not improve ub.
    bool test(const CostVector& h)
    {
        InducedResult r;
        {
            Stopwatch sw(report_.satSeconds);
            r = oracle_.solveInduced(h);
        }
        if (r.satisfiable) return offerSolution(cost(r.solution), std::move(r.assignment));
        improveAndAdd(h, std::move(r.lazyCore));
        return true;
    }

    bool offerSolution(Cost c, Assignment a)
    {
        if (ub_ && c >= *ub_) return false;
        ub_ = c;
        best_ = std::move(a);
        return true;
    }

    void improveAndAdd(const CostVector& h, CostVector lazyCore)
    {
        Stopwatch sw(report_.improveSeconds);
        CostVector k = improveAndInsert(std::move(lazyCore));
        if (!cfg_.disjointCores) return;

        std::vector<bool> covered(space_.size(), false);
        auto cover = [&](const CostVector& core) {
            for (std::size_t i = 0; i < space_.size(); ++i)
                if (!space_.atMax(i, core[i])) covered[i] = true;
        };
        cover(k);
        for (std::size_t extra = 0; extra < cfg_.disjointLimit; ++extra) {
            deadline_.check();
            CostVector probe = h;
            for (std::size_t i = 0; i < space_.size(); ++i)
                if (covered[i]) probe[i] = space_.maxLevel(i);
            InducedResult r = oracle_.solveInduced(probe);
            if (r.satisfiable) {
                offerSolution(cost(r.solution), std::move(r.assignment));
                break;
            }
            cover(improveAndInsert(std::move(r.lazyCore)));
        }
    }

    CostVector improveAndInsert(CostVector lazyCore)
    {
        ImproveOutcome out = improveCore(cfg_.core, oracle_, std::move(lazyCore), ub_);
        report_.improveProbes += out.probes;
        if (out.newUb) offerSolution(out.newUb->cost, std::move(out.newUb->assignment));
        if (cores_.insert(out.core)) {
            ++report_.coresAdded;
            report_.insertedCores.push_back(out.core);
        }
        return out.core;
    }

    Cost offset() const { return problem_.base().offset(); }
    std::optional<Cost> ubWithOffset() const { return ub_ ? std::optional<Cost>(*ub_ + offset()) : std::nullopt; }

    void finish()
    {
        report_.satCalls = oracle_.calls();
        report_.coreSetSize = cores_.size();
        report_.cores = cores_.cores();
        report_.finalLb = lb_ + offset();
        report_.finalUb = ubWithOffset();
        report_.bestAssignment = best_;
        if (report_.status == RunStatus::Optimal) {
            report_.finalLb = *report_.finalUb;
            report_.optimum = report_.finalUb;
        }
    }

    SolverConfig cfg_;
    MergedProblem problem_;
    CspOracle oracle_;
    const LevelSpace& space_;
    Deadline deadline_;
    CoreSet cores_;
    Cost lb_ = 0;
    std::optional<Cost> ub_;
    std::optional<Assignment> best_;
    RunReport report_;
};

}  // namespace detail

/// Solves `w` with the configured IHS variant.
inline RunReport solve(const WcspInstance& w, const SolverConfig& cfg)
{
    if (!(cfg.timeLimit > 0)) throw std::invalid_argument("time limit must be positive");
    detail::IhsRun run(w, cfg);
    return run.run();
}

}  // namespace ihs
