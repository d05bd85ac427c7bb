#pragma once

// Benchmark plumbing: configuration matrices, a parallel batch runner that
// produces one BenchRow per (instance, configuration), the CSV layer, and the
// ratio tables computed from a CSV.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "ihs/ihs_solver.hpp"
#include "ihs/wcsp_format.hpp"

namespace ihs::bench {

struct BenchConfig {
    HvStrategy hv = HvStrategy::Lb;
    CoreStrategy core = CoreStrategy::Maximal;
    bool merge = false;
    bool disjoint = false;

    auto operator<=>(const BenchConfig&) const = default;
};

inline constexpr HvStrategy kAllHv[] = {HvStrategy::Lb, HvStrategy::Ub, HvStrategy::GrdLb, HvStrategy::GrdUb};
inline constexpr CoreStrategy kAllCore[] = {CoreStrategy::Lazy, CoreStrategy::CostBounded, CoreStrategy::PartialMax,
                                            CoreStrategy::Maximal};

inline std::string_view onOff(bool b) { return b ? "on" : "off"; }

inline std::optional<bool> parseOnOff(std::string_view s)
{
    if (s == "on") return true;
    if (s == "off") return false;
    return std::nullopt;
}

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = s.find(sep, start);
        out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Parses "hv=lb,ub;core=maximal;merge=on". Keys left out take every value
/// (hv, core, merge) or "off" (disjoint). An empty spec is the full 32-run
/// matrix. Order: hv, core, merge, disjoint, each in the listed order.
inline std::vector<BenchConfig> parseMatrix(std::string_view spec)
{
    std::vector<HvStrategy> hvs(std::begin(kAllHv), std::end(kAllHv));
    std::vector<CoreStrategy> cores(std::begin(kAllCore), std::end(kAllCore));
    std::vector<bool> merges{false, true};
    std::vector<bool> disjoints{false};

    std::set<std::string, std::less<>> seen;
    for (std::string_view part : detail::split(spec, ';')) {
        part = detail::trim(part);
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string_view::npos) throw SpecError("matrix entry without '=': " + std::string(part));
        std::string_view key = detail::trim(part.substr(0, eq));
        auto values = detail::split(part.substr(eq + 1), ',');
        if (!seen.insert(std::string(key)).second) throw SpecError("matrix key repeated: " + std::string(key));
        auto bad = [&](std::string_view v) { return SpecError("bad value '" + std::string(v) + "' for " + std::string(key)); };
        if (key == "hv") {
            hvs.clear();
            for (auto v : values) {
                auto h = parseHvStrategy(detail::trim(v));
                if (!h) throw bad(v);
                hvs.push_back(*h);
            }
        } else if (key == "core") {
            cores.clear();
            for (auto v : values) {
                auto c = parseCoreStrategy(detail::trim(v));
                if (!c) throw bad(v);
                cores.push_back(*c);
            }
        } else if (key == "merge" || key == "disjoint") {
            auto& target = key == "merge" ? merges : disjoints;
            target.clear();
            for (auto v : values) {
                auto b = parseOnOff(detail::trim(v));
                if (!b) throw bad(v);
                target.push_back(*b);
            }
        } else {
            throw SpecError("unknown matrix key: " + std::string(key));
        }
    }

    std::vector<BenchConfig> out;
    for (auto h : hvs)
        for (auto c : cores)
            for (bool m : merges)
                for (bool d : disjoints) {
                    BenchConfig cfg{h, c, m, d};
                    if (std::find(out.begin(), out.end(), cfg) == out.end()) out.push_back(cfg);
                }
    return out;
}

struct BenchRow {
    std::string instance;
    BenchConfig config;
    RunStatus status = RunStatus::Error;
    std::optional<Cost> optimum;
    Cost lb = 0;
    std::optional<Cost> ub;
    std::uint64_t iterations = 0;
    std::uint64_t coreSetSize = 0;
    double hvTimeMs = 0;
    double satTimeMs = 0;
    double improveTimeMs = 0;
    double totalTimeMs = 0;
    std::uint64_t seed = 0;
};

inline BenchRow makeRow(std::string instance, const BenchConfig& cfg, const RunReport& r, std::uint64_t seed)
{
    BenchRow row;
    row.instance = std::move(instance);
    row.config = cfg;
    row.status = r.status;
    row.optimum = r.optimum;
    row.lb = r.finalLb;
    row.ub = r.finalUb;
    row.iterations = r.iterations;
    row.coreSetSize = r.coreSetSize;
    row.hvTimeMs = r.hvSeconds * 1e3;
    row.satTimeMs = r.satSeconds * 1e3;
    row.improveTimeMs = r.improveSeconds * 1e3;
    row.totalTimeMs = r.totalSeconds * 1e3;
    row.seed = seed;
    return row;
}

// ---------------------------------------------------------------------- CSV

inline constexpr std::string_view kCsvHeader =
    "instance,hv,core,merge,disjoint,status,optimum,lb,ub,iterations,coreSetSize,"
    "hvTimeMs,satTimeMs,improveTimeMs,totalTimeMs,seed";

inline void writeCsvRow(std::ostream& out, const BenchRow& r)
{
    auto opt = [&](const std::optional<Cost>& c) {
        if (c) out << *c;
    };
    auto ms = [&](double t) { out << std::fixed << std::setprecision(3) << t; };
    out << r.instance << ',' << toString(r.config.hv) << ',' << toString(r.config.core) << ',' << onOff(r.config.merge)
        << ',' << onOff(r.config.disjoint) << ',' << toString(r.status) << ',';
    opt(r.optimum);
    out << ',' << r.lb << ',';
    opt(r.ub);
    out << ',' << r.iterations << ',' << r.coreSetSize << ',';
    ms(r.hvTimeMs);
    out << ',';
    ms(r.satTimeMs);
    out << ',';
    ms(r.improveTimeMs);
    out << ',';
    ms(r.totalTimeMs);
    out << ',' << r.seed << '\n';
}

inline void writeCsv(std::ostream& out, std::span<const BenchRow> rows)
{
    out << kCsvHeader << '\n';
    for (const auto& r : rows) writeCsvRow(out, r);
}

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("csv line " + std::to_string(line) + ": " + what)
    {
    }
};

inline std::vector<BenchRow> readCsv(std::istream& in)
{
    std::string line;
    std::size_t lineNo = 1;
    if (!std::getline(in, line)) throw CsvError(1, "empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw CsvError(1, "unexpected header");

    auto toU64 = [&](std::string_view s, const char* what) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw CsvError(lineNo, std::string("bad ") + what);
        return v;
    };
    auto toOpt = [&](std::string_view s, const char* what) -> std::optional<Cost> {
        if (s.empty()) return std::nullopt;
        return toU64(s, what);
    };
    auto toMs = [&](std::string_view s, const char* what) {
        try {
            std::size_t used = 0;
            double v = std::stod(std::string(s), &used);
            if (used != s.size()) throw std::invalid_argument(what);
            return v;
        } catch (const std::exception&) {
            throw CsvError(lineNo, std::string("bad ") + what);
        }
    };

    std::vector<BenchRow> rows;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = detail::split(line, ',');
        if (f.size() != 16) throw CsvError(lineNo, "expected 16 fields");
        BenchRow r;
        r.instance = std::string(f[0]);
        auto hv = parseHvStrategy(f[1]);
        auto core = parseCoreStrategy(f[2]);
        auto merge = parseOnOff(f[3]);
        auto disjoint = parseOnOff(f[4]);
        if (!hv || !core || !merge || !disjoint) throw CsvError(lineNo, "bad configuration");
        r.config = {*hv, *core, *merge, *disjoint};
        bool known = false;
        for (auto s : {RunStatus::Optimal, RunStatus::Timeout, RunStatus::Infeasible, RunStatus::Error})
            if (toString(s) == f[5]) {
                r.status = s;
                known = true;
            }
        if (!known) throw CsvError(lineNo, "bad status");
        r.optimum = toOpt(f[6], "optimum");
        r.lb = toU64(f[7], "lb");
        r.ub = toOpt(f[8], "ub");
        r.iterations = toU64(f[9], "iterations");
        r.coreSetSize = toU64(f[10], "coreSetSize");
        r.hvTimeMs = toMs(f[11], "hvTimeMs");
        r.satTimeMs = toMs(f[12], "satTimeMs");
        r.improveTimeMs = toMs(f[13], "improveTimeMs");
        r.totalTimeMs = toMs(f[14], "totalTimeMs");
        r.seed = toU64(f[15], "seed");
        rows.push_back(std::move(r));
    }
    return rows;
}

// ------------------------------------------------------------------- batches

struct BatchInput {
    std::string id;
    std::optional<WcspInstance> instance;  ///< loaded from `path` when empty
    std::string path;
};

struct BatchOptions {
    double timeLimit = 60.0;
    std::size_t mergeCap = kDefaultMergeCap;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

/// Instance files (*.wcsp) of a directory, sorted by name; ids are file stems.
inline std::vector<BatchInput> instanceDirectory(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::vector<BatchInput> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".wcsp")
            out.push_back({e.path().stem().string(), std::nullopt, e.path().string()});
    std::sort(out.begin(), out.end(), [](const BatchInput& a, const BatchInput& b) { return a.id < b.id; });
    return out;
}

/// Runs every configuration on every input on `jobs` worker threads. Rows come
/// back ordered by input, then configuration; failures become error rows.
inline std::vector<BenchRow> runBatch(const std::vector<BatchInput>& inputs, const std::vector<BenchConfig>& configs,
                                      const BatchOptions& opts)
{
    const std::size_t total = inputs.size() * configs.size();
    std::vector<BenchRow> rows(total);
    std::atomic<std::size_t> next{0};

    std::vector<std::optional<WcspInstance>> loaded(inputs.size());
    std::vector<std::string> loadErrors(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].instance) continue;
        try {
            loaded[i] = readWcspFile(inputs[i].path);
        } catch (const std::exception& e) {
            loadErrors[i] = e.what();
        }
    }

    auto worker = [&] {
        for (std::size_t job; (job = next.fetch_add(1)) < total;) {
            const std::size_t i = job / configs.size();
            const BenchConfig& bc = configs[job % configs.size()];
            const WcspInstance* w = inputs[i].instance ? &*inputs[i].instance : loaded[i] ? &*loaded[i] : nullptr;
            BenchRow row;
            row.instance = inputs[i].id;
            row.config = bc;
            row.seed = opts.seed;
            if (w) {
                try {
                    SolverConfig cfg;
                    cfg.hv = bc.hv;
                    cfg.core = bc.core;
                    cfg.merge = bc.merge;
                    cfg.disjointCores = bc.disjoint;
                    cfg.mergeCap = opts.mergeCap;
                    cfg.timeLimit = opts.timeLimit;
                    cfg.seed = opts.seed;
                    row = makeRow(inputs[i].id, bc, solve(*w, cfg), opts.seed);
                } catch (const std::exception&) {
                    row.status = RunStatus::Error;
                }
            }
            rows[job] = std::move(row);
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, total));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    return rows;
}

// -------------------------------------------------------------------- tables

enum class TableKind { TimeRatio, CoreRatio, Speedup };
enum class TimeoutMode { Clamp, Exclude };

inline std::optional<TableKind> parseTableKind(std::string_view s)
{
    if (s == "time-ratio") return TableKind::TimeRatio;
    if (s == "core-ratio") return TableKind::CoreRatio;
    if (s == "speedup") return TableKind::Speedup;
    return std::nullopt;
}

inline std::optional<TimeoutMode> parseTimeoutMode(std::string_view s)
{
    if (s == "clamp") return TimeoutMode::Clamp;
    if (s == "exclude") return TimeoutMode::Exclude;
    return std::nullopt;
}

/// Instance id without a trailing "_<digits>" (the generator's seed suffix).
inline std::string benchmarkOf(std::string_view instance)
{
    auto us = instance.rfind('_');
    if (us == std::string_view::npos || us + 1 == instance.size()) return std::string(instance);
    for (char c : instance.substr(us + 1))
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::string(instance);
    return std::string(instance.substr(0, us));
}

struct TableOptions {
    TableKind kind = TableKind::TimeRatio;
    TimeoutMode timeoutMode = TimeoutMode::Clamp;
    /// Charged to every unsolved run in clamp mode; when absent the run's own
    /// recorded time is used.
    std::optional<double> timeLimitMs;
};

struct Cell {
    std::optional<double> mean;   ///< empty when no run contributes
    std::optional<double> ratio;  ///< mean / best mean of the benchmark
    std::size_t runs = 0;
    std::size_t unsolved = 0;
};

struct BenchmarkBlock {
    std::string name;
    std::map<BenchConfig, Cell> cells;
};

struct SpeedupRow {
    std::string name;
    std::optional<double> bestOff;
    std::optional<double> bestOn;
    std::optional<double> speedup;  ///< bestOff / bestOn
};

inline bool solved(const BenchRow& r) { return r.status == RunStatus::Optimal || r.status == RunStatus::Infeasible; }

/// Per benchmark and configuration: mean time (or |K|) and its ratio to the
/// best mean of the benchmark.
inline std::vector<BenchmarkBlock> ratioTable(std::span<const BenchRow> rows, const TableOptions& opts)
{
    struct Acc {
        double sum = 0;
        std::size_t n = 0, runs = 0, unsolved = 0;
    };
    std::map<std::string, std::map<BenchConfig, Acc>> acc;
    for (const auto& r : rows) {
        Acc& a = acc[benchmarkOf(r.instance)][r.config];
        ++a.runs;
        const bool ok = solved(r);
        if (!ok) ++a.unsolved;
        if (!ok && opts.timeoutMode == TimeoutMode::Exclude) continue;
        double value = 0;
        if (opts.kind == TableKind::CoreRatio) {
            value = static_cast<double>(r.coreSetSize);
        } else {
            value = r.totalTimeMs;
            if (!ok && opts.timeLimitMs) value = *opts.timeLimitMs;
        }
        a.sum += value;
        ++a.n;
    }

    std::vector<BenchmarkBlock> out;
    for (auto& [name, configs] : acc) {
        BenchmarkBlock block{name, {}};
        std::optional<double> best;
        for (auto& [cfg, a] : configs) {
            Cell c;
            c.runs = a.runs;
            c.unsolved = a.unsolved;
            if (a.n > 0) c.mean = a.sum / static_cast<double>(a.n);
            if (c.mean && (!best || *c.mean < *best)) best = c.mean;
            block.cells[cfg] = c;
        }
        for (auto& [cfg, c] : block.cells) {
            if (!c.mean) continue;
            if (*best > 0)
                c.ratio = *c.mean / *best;
            else
                c.ratio = *c.mean == 0 ? 1.0 : std::numeric_limits<double>::infinity();
        }
        out.push_back(std::move(block));
    }
    return out;
}

/// Best mean time without merging over best mean time with merging, per
/// benchmark.
inline std::vector<SpeedupRow> speedupTable(std::span<const BenchRow> rows, const TableOptions& opts)
{
    TableOptions t = opts;
    t.kind = TableKind::TimeRatio;
    std::vector<SpeedupRow> out;
    for (const auto& block : ratioTable(rows, t)) {
        SpeedupRow s{block.name, {}, {}, {}};
        for (const auto& [cfg, c] : block.cells) {
            if (!c.mean) continue;
            auto& best = cfg.merge ? s.bestOn : s.bestOff;
            if (!best || *c.mean < *best) best = c.mean;
        }
        if (s.bestOff && s.bestOn && *s.bestOn > 0) s.speedup = *s.bestOff / *s.bestOn;
        out.push_back(std::move(s));
    }
    return out;
}

namespace detail {

inline std::string fmt(double v)
{
    if (std::isinf(v)) return "inf";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

}  // namespace detail

/// Markdown rendering. Ratio tables get one block per benchmark and
/// merge/disjoint setting, with rows per core strategy and columns per
/// hitting-vector strategy; unsolved counts are shown in parentheses.
inline std::string renderTable(std::span<const BenchRow> rows, const TableOptions& opts)
{
    std::ostringstream out;
    const char* mode = opts.timeoutMode == TimeoutMode::Clamp ? "unsolved runs counted at the time limit"
                                                              : "unsolved runs excluded from means";
    if (opts.kind == TableKind::Speedup) {
        out << "# speedup: best time with merging off / best time with merging on (" << mode << ")\n\n";
        out << "| benchmark | best off (ms) | best on (ms) | speedup |\n|---|---|---|---|\n";
        for (const auto& s : speedupTable(rows, opts))
            out << "| " << s.name << " | " << (s.bestOff ? detail::fmt(*s.bestOff) : "-") << " | "
                << (s.bestOn ? detail::fmt(*s.bestOn) : "-") << " | " << (s.speedup ? detail::fmt(*s.speedup) : "-")
                << " |\n";
        return out.str();
    }

    out << "# " << (opts.kind == TableKind::TimeRatio ? "time-ratio" : "core-ratio")
        << ": mean over instances divided by the best mean of the benchmark (" << mode << ")\n";
    constexpr HvStrategy columns[] = {HvStrategy::GrdUb, HvStrategy::Ub, HvStrategy::GrdLb, HvStrategy::Lb};
    for (const auto& block : ratioTable(rows, opts)) {
        std::set<std::pair<bool, bool>> settings;
        for (const auto& [cfg, c] : block.cells) settings.insert({cfg.merge, cfg.disjoint});
        for (auto [merge, disjoint] : settings) {
            out << "\n## " << block.name << " (merge " << onOff(merge) << ", disjoint " << onOff(disjoint) << ")\n\n";
            out << "| core |";
            for (auto h : columns) out << ' ' << toString(h) << " |";
            out << "\n|---|---|---|---|---|\n";
            for (auto core : kAllCore) {
                out << "| " << toString(core) << " |";
                for (auto h : columns) {
                    auto it = block.cells.find(BenchConfig{h, core, merge, disjoint});
                    out << ' ';
                    if (it == block.cells.end()) {
                        out << "|";
                        continue;
                    }
                    const Cell& c = it->second;
                    out << (c.ratio ? detail::fmt(*c.ratio) : "-");
                    if (c.unsolved > 0) out << " (" << c.unsolved << ')';
                    out << " |";
                }
                out << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace ihs::bench
