// ihs-wcsp: solve, generate, bench, table.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ihs/ihs.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum Exit { kOptimal = 0, kError = 1, kTimeout = 2, kInfeasible = 3 };

template <class T>
CLI::Validator choice(std::optional<T> (*parse)(std::string_view), const std::string& names)
{
    return CLI::Validator(
        [parse, names](std::string& s) { return parse(s) ? std::string() : "expected one of " + names; }, names);
}

CLI::Validator onOffChoice() { return choice<bool>(&ihs::bench::parseOnOff, "on|off"); }

std::vector<std::uint64_t> parseParams(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoull(item));
    if (out.size() != 5) throw std::invalid_argument("--params expects n,d,m,w,t");
    return out;
}

std::string optionalCost(const std::optional<ihs::Cost>& c) { return c ? std::to_string(*c) : "none"; }

json reportJson(const ihs::RunReport& r)
{
    json j;
    j["status"] = ihs::toString(r.status);
    j["optimum"] = r.optimum ? json(*r.optimum) : json(nullptr);
    j["lb"] = r.finalLb;
    j["ub"] = r.finalUb ? json(*r.finalUb) : json(nullptr);
    j["iterations"] = r.iterations;
    j["hvCalls"] = r.hvCalls;
    j["satCalls"] = r.satCalls;
    j["improveProbes"] = r.improveProbes;
    j["coreSetSize"] = r.coreSetSize;
    j["components"] = r.componentCount;
    j["mergeFallbacks"] = r.mergeFallbacks;
    j["hvTimeMs"] = r.hvSeconds * 1e3;
    j["satTimeMs"] = r.satSeconds * 1e3;
    j["improveTimeMs"] = r.improveSeconds * 1e3;
    j["totalTimeMs"] = r.totalSeconds * 1e3;
    if (r.bestAssignment) j["assignment"] = r.bestAssignment->values;
    json trace = json::array();
    for (const auto& p : r.boundsTrace) trace.push_back({p.lb, p.ub ? json(*p.ub) : json(nullptr)});
    j["boundsTrace"] = trace;
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

void printReport(const ihs::RunReport& r)
{
    std::cout << "status " << ihs::toString(r.status) << '\n';
    if (r.optimum) std::cout << "optimum " << *r.optimum << '\n';
    std::cout << "lb " << r.finalLb << '\n'
              << "ub " << optionalCost(r.finalUb) << '\n'
              << "iterations " << r.iterations << '\n'
              << "hv_calls " << r.hvCalls << '\n'
              << "sat_calls " << r.satCalls << '\n'
              << "improve_probes " << r.improveProbes << '\n'
              << "core_set_size " << r.coreSetSize << '\n'
              << "components " << r.componentCount << '\n'
              << "merge_fallbacks " << r.mergeFallbacks << '\n'
              << std::fixed << std::setprecision(3) << "hv_time_ms " << r.hvSeconds * 1e3 << '\n'
              << "sat_time_ms " << r.satSeconds * 1e3 << '\n'
              << "improve_time_ms " << r.improveSeconds * 1e3 << '\n'
              << "total_time_ms " << r.totalSeconds * 1e3 << '\n';
    if (r.bestAssignment) {
        std::cout << "assignment";
        for (auto v : r.bestAssignment->values) std::cout << ' ' << v;
        std::cout << '\n';
    }
    if (!r.message.empty()) std::cout << "message " << r.message << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weighted CSP solver based on implicit hitting sets"};
    app.require_subcommand(1);

    std::string hv = "lb", core = "maximal", merge = "off", disjoint = "off";
    std::size_t mergeCap = ihs::kDefaultMergeCap;
    double timeout = 60.0;
    std::uint64_t seed = 0;

    auto* solveCmd = app.add_subcommand("solve", "solve one instance");
    std::string instance;
    bool asJson = false;
    solveCmd->add_option("--instance", instance, "wcsp file")->required()->check(CLI::ExistingFile);
    solveCmd->add_option("--hv", hv)->check(choice<ihs::HvStrategy>(&ihs::parseHvStrategy, "lb|ub|grd-lb|grd-ub"));
    solveCmd->add_option("--core", core)
        ->check(choice<ihs::CoreStrategy>(&ihs::parseCoreStrategy, "lazy|cost-bounded|partial-max|maximal"));
    solveCmd->add_option("--merge", merge)->check(onOffChoice());
    solveCmd->add_option("--disjoint", disjoint)->check(onOffChoice());
    solveCmd->add_option("--merge-cap", mergeCap)->check(CLI::PositiveNumber);
    solveCmd->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
    solveCmd->add_option("--seed", seed);
    solveCmd->add_flag("--json", asJson, "print the report as JSON");

    auto* genCmd = app.add_subcommand("generate", "write random instances");
    std::string cls, params, outPath = ".";
    std::uint64_t count = 1;
    genCmd->add_option("--class", cls)->required()->check(CLI::IsMember({"uniform", "scale-free"}));
    genCmd->add_option("--params", params, "n,d,m,w,t")->required();
    genCmd->add_option("--count", count);
    genCmd->add_option("--seed", seed, "first seed");
    genCmd->add_option("--out", outPath, "output directory");

    auto* benchCmd = app.add_subcommand("bench", "run a configuration matrix over a directory");
    std::string benchDir, matrix, csvOut;
    std::size_t jobs = 1;
    benchCmd->add_option("--instance", benchDir, "directory of .wcsp files")->required()->check(CLI::ExistingDirectory);
    benchCmd->add_option("--matrix", matrix, "e.g. hv=lb,ub;core=maximal;merge=on");
    benchCmd->add_option("--timeout", timeout, "seconds per run")->check(CLI::PositiveNumber);
    benchCmd->add_option("--merge-cap", mergeCap)->check(CLI::PositiveNumber);
    benchCmd->add_option("--seed", seed);
    benchCmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    benchCmd->add_option("--out,--csv", csvOut, "CSV file (default: standard output)");

    auto* tableCmd = app.add_subcommand("table", "ratio tables from a bench CSV");
    std::string csvIn, kind = "time-ratio", timeoutMode = "clamp";
    std::optional<double> limitSeconds;
    tableCmd->add_option("--csv", csvIn)->required()->check(CLI::ExistingFile);
    tableCmd->add_option("--kind", kind)
        ->check(choice<ihs::bench::TableKind>(&ihs::bench::parseTableKind, "time-ratio|core-ratio|speedup"));
    tableCmd->add_option("--timeout-mode", timeoutMode)
        ->check(choice<ihs::bench::TimeoutMode>(&ihs::bench::parseTimeoutMode, "clamp|exclude"));
    tableCmd->add_option("--timeout", limitSeconds, "time limit charged to unsolved runs in clamp mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kError;
    }

    try {
        if (*solveCmd) {
            ihs::SolverConfig cfg;
            cfg.hv = *ihs::parseHvStrategy(hv);
            cfg.core = *ihs::parseCoreStrategy(core);
            cfg.merge = *ihs::bench::parseOnOff(merge);
            cfg.disjointCores = *ihs::bench::parseOnOff(disjoint);
            cfg.mergeCap = mergeCap;
            cfg.timeLimit = timeout;
            cfg.seed = seed;
            const auto report = ihs::solve(ihs::readWcspFile(instance), cfg);
            if (asJson)
                std::cout << reportJson(report).dump(2) << '\n';
            else
                printReport(report);
            switch (report.status) {
            case ihs::RunStatus::Optimal: return kOptimal;
            case ihs::RunStatus::Timeout: return kTimeout;
            case ihs::RunStatus::Infeasible: return kInfeasible;
            case ihs::RunStatus::Error: return kError;
            }
        }

        if (*genCmd) {
            const auto p = parseParams(params);
            fs::create_directories(outPath);
            for (std::uint64_t k = 0; k < count; ++k) {
                ihs::GeneratorParams gp{p[0], p[1], p[2], p[3], p[4], seed + k};
                auto w = cls == "uniform" ? ihs::genUniform(gp) : ihs::genScaleFree(gp);
                const fs::path file = fs::path(outPath) / (cls + "_" + std::to_string(gp.seed) + ".wcsp");
                ihs::writeWcspFile(file.string(), w);
            }
            return 0;
        }

        if (*benchCmd) {
            const auto configs = ihs::bench::parseMatrix(matrix);
            ihs::bench::BatchOptions opts;
            opts.timeLimit = timeout;
            opts.mergeCap = mergeCap;
            opts.seed = seed;
            opts.jobs = jobs;
            const auto rows = ihs::bench::runBatch(ihs::bench::instanceDirectory(benchDir), configs, opts);
            if (csvOut.empty()) {
                ihs::bench::writeCsv(std::cout, rows);
            } else {
                std::ofstream f(csvOut);
                if (!f) throw std::runtime_error("cannot write " + csvOut);
                ihs::bench::writeCsv(f, rows);
            }
            return 0;
        }

        if (*tableCmd) {
            std::ifstream f(csvIn);
            const auto rows = ihs::bench::readCsv(f);
            ihs::bench::TableOptions opts;
            opts.kind = *ihs::bench::parseTableKind(kind);
            opts.timeoutMode = *ihs::bench::parseTimeoutMode(timeoutMode);
            if (limitSeconds) opts.timeLimitMs = *limitSeconds * 1e3;
            std::cout << ihs::bench::renderTable(rows, opts);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
