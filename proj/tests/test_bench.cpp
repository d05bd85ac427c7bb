#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace ihs;
using namespace ihs::bench;

namespace {

BenchRow row(std::string instance, HvStrategy hv, CoreStrategy core, bool merge, double ms, std::uint64_t cores = 1,
             RunStatus status = RunStatus::Optimal)
{
    BenchRow r;
    r.instance = std::move(instance);
    r.config = {hv, core, merge, false};
    r.status = status;
    if (status == RunStatus::Optimal) {
        r.optimum = 5;
        r.ub = 5;
    }
    r.lb = 5;
    r.totalTimeMs = ms;
    r.coreSetSize = cores;
    return r;
}

std::size_t cellsAtOne(const BenchmarkBlock& b)
{
    std::size_t n = 0;
    for (const auto& [cfg, c] : b.cells)
        if (c.ratio && *c.ratio == 1.0) ++n;
    return n;
}

}  // namespace

TEST(Matrix, DefaultIsFull32)
{
    auto m = parseMatrix("");
    EXPECT_EQ(m.size(), 32u);
    std::set<BenchConfig> distinct(m.begin(), m.end());
    EXPECT_EQ(distinct.size(), 32u);
}

TEST(Matrix, Restricted)
{
    auto m = parseMatrix("hv=lb,ub;core=maximal;merge=on");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0], (BenchConfig{HvStrategy::Lb, CoreStrategy::Maximal, true, false}));
    EXPECT_EQ(m[1], (BenchConfig{HvStrategy::Ub, CoreStrategy::Maximal, true, false}));
    EXPECT_EQ(parseMatrix("disjoint=on,off").size(), 64u);
}

TEST(Matrix, Errors)
{
    EXPECT_THROW(parseMatrix("hv=fast"), SpecError);
    EXPECT_THROW(parseMatrix("speed=1"), SpecError);
    EXPECT_THROW(parseMatrix("hv"), SpecError);
    EXPECT_THROW(parseMatrix("hv=lb;hv=ub"), SpecError);
}

TEST(BenchmarkId, StripsSeedSuffix)
{
    EXPECT_EQ(benchmarkOf("uniform_12"), "uniform");
    EXPECT_EQ(benchmarkOf("scale-free_3"), "scale-free");
    EXPECT_EQ(benchmarkOf("spot5"), "spot5");
    EXPECT_EQ(benchmarkOf("grid_a"), "grid_a");
    EXPECT_EQ(benchmarkOf("x_"), "x_");
}

TEST(Csv, RoundTrip)
{
    std::vector<BenchRow> rows{row("a_1", HvStrategy::GrdUb, CoreStrategy::PartialMax, true, 12.5, 7),
                               row("a_2", HvStrategy::Lb, CoreStrategy::Lazy, false, 60000, 3, RunStatus::Timeout)};
    rows[1].ub.reset();
    rows[1].seed = 42;
    std::ostringstream out;
    writeCsv(out, rows);
    std::istringstream in(out.str());
    auto back = readCsv(in);
    ASSERT_EQ(back.size(), 2u);
    std::ostringstream again;
    writeCsv(again, back);
    EXPECT_EQ(again.str(), out.str());
    EXPECT_EQ(back[0].config, rows[0].config);
    EXPECT_FALSE(back[1].ub.has_value());
    EXPECT_EQ(back[1].seed, 42u);
}

TEST(Csv, SchemaMismatch)
{
    std::istringstream badHeader("instance,hv\n");
    EXPECT_THROW(readCsv(badHeader), CsvError);
    std::istringstream shortRow(std::string(kCsvHeader) + "\na,lb,lazy,off,off,optimal,1\n");
    EXPECT_THROW(readCsv(shortRow), CsvError);
    std::istringstream badStatus(std::string(kCsvHeader) +
                                 "\na,lb,lazy,off,off,solved,1,1,1,1,1,0.000,0.000,0.000,0.000,0\n");
    EXPECT_THROW(readCsv(badStatus), CsvError);
}

TEST(RatioTable, SingleConfigIsOne)
{
    std::vector<BenchRow> rows{row("u_1", HvStrategy::Lb, CoreStrategy::Lazy, false, 3)};
    auto t = ratioTable(rows, {});
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].cells.begin()->second.ratio, 1.0);
}

TEST(RatioTable, TwoConfigs)
{
    std::vector<BenchRow> rows{row("u_1", HvStrategy::Lb, CoreStrategy::Lazy, false, 10),
                               row("u_1", HvStrategy::Ub, CoreStrategy::Lazy, false, 25)};
    auto t = ratioTable(rows, {});
    EXPECT_EQ(t[0].cells.at({HvStrategy::Lb, CoreStrategy::Lazy, false, false}).ratio, 1.0);
    EXPECT_EQ(t[0].cells.at({HvStrategy::Ub, CoreStrategy::Lazy, false, false}).ratio, 2.5);
}

TEST(RatioTable, TimeoutModes)
{
    std::vector<BenchRow> rows{row("u_1", HvStrategy::Lb, CoreStrategy::Lazy, false, 10),
                               row("u_2", HvStrategy::Lb, CoreStrategy::Lazy, false, 900, 1, RunStatus::Timeout),
                               row("u_1", HvStrategy::Ub, CoreStrategy::Lazy, false, 40),
                               row("u_2", HvStrategy::Ub, CoreStrategy::Lazy, false, 60)};
    TableOptions clamp;
    clamp.timeLimitMs = 1000;
    auto t = ratioTable(rows, clamp);
    const auto& lb = t[0].cells.at({HvStrategy::Lb, CoreStrategy::Lazy, false, false});
    const auto& ub = t[0].cells.at({HvStrategy::Ub, CoreStrategy::Lazy, false, false});
    EXPECT_EQ(lb.mean, 505.0);
    EXPECT_EQ(lb.unsolved, 1u);
    EXPECT_EQ(ub.ratio, 1.0);
    EXPECT_DOUBLE_EQ(*lb.ratio, 505.0 / 50.0);

    TableOptions exclude;
    exclude.timeoutMode = TimeoutMode::Exclude;
    auto e = ratioTable(rows, exclude);
    EXPECT_EQ(e[0].cells.at({HvStrategy::Lb, CoreStrategy::Lazy, false, false}).ratio, 1.0);
    EXPECT_EQ(e[0].cells.at({HvStrategy::Ub, CoreStrategy::Lazy, false, false}).ratio, 5.0);
}

TEST(RatioTable, SyntheticBlockHasOneBestCellPerBenchmark)
{
    // a 16-cell block per benchmark with distinct means and some unsolved runs
    std::vector<BenchRow> rows;
    double t = 3;
    for (std::string bench : {"celar", "grid"})
        for (auto hv : kAllHv)
            for (auto core : kAllCore)
                for (int inst = 0; inst < 3; ++inst) {
                    t += 1.25;
                    const bool unsolved = core == CoreStrategy::Lazy && inst == 2;
                    rows.push_back(row(bench + "_" + std::to_string(inst), hv, core, false, t, 2 + inst,
                                       unsolved ? RunStatus::Timeout : RunStatus::Optimal));
                }
    std::ostringstream csv;
    writeCsv(csv, rows);
    std::istringstream in(csv.str());
    auto parsed = readCsv(in);
    auto table = ratioTable(parsed, {});
    ASSERT_EQ(table.size(), 2u);
    for (const auto& b : table) {
        EXPECT_EQ(cellsAtOne(b), 1u) << b.name;
        EXPECT_EQ(b.cells.size(), 16u);
        for (const auto& [cfg, c] : b.cells) {
            EXPECT_EQ(c.unsolved, cfg.core == CoreStrategy::Lazy ? 1u : 0u);
            EXPECT_GE(*c.ratio, 1.0);
        }
    }
    auto text = renderTable(parsed, {});
    EXPECT_NE(text.find("| lazy |"), std::string::npos);
    EXPECT_NE(text.find("(1)"), std::string::npos);
    EXPECT_NE(text.find("| core | grd-ub | ub | grd-lb | lb |"), std::string::npos);
}

TEST(SpeedupTable, BestOffOverBestOn)
{
    std::vector<BenchRow> rows{row("s_1", HvStrategy::Lb, CoreStrategy::Lazy, false, 30),
                               row("s_1", HvStrategy::Ub, CoreStrategy::Lazy, false, 20),
                               row("s_1", HvStrategy::Lb, CoreStrategy::Lazy, true, 10),
                               row("s_1", HvStrategy::Ub, CoreStrategy::Lazy, true, 40)};
    auto s = speedupTable(rows, {});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].bestOff, 20.0);
    EXPECT_EQ(s[0].bestOn, 10.0);
    EXPECT_EQ(s[0].speedup, 2.0);
}

TEST(CoreRatio, UsesCoreSetSize)
{
    std::vector<BenchRow> rows{row("c_1", HvStrategy::Lb, CoreStrategy::Lazy, false, 1, 8),
                               row("c_1", HvStrategy::Lb, CoreStrategy::Maximal, false, 9, 4)};
    TableOptions o;
    o.kind = TableKind::CoreRatio;
    auto t = ratioTable(rows, o);
    EXPECT_EQ(t[0].cells.at({HvStrategy::Lb, CoreStrategy::Lazy, false, false}).ratio, 2.0);
    EXPECT_EQ(t[0].cells.at({HvStrategy::Lb, CoreStrategy::Maximal, false, false}).ratio, 1.0);
}

TEST(RunBatch, OneRowPerRunInStableOrder)
{
    std::vector<BatchInput> inputs;
    for (std::uint64_t k = 0; k < 2; ++k) {
        auto w = testing_support::suiteInstance(k);
        inputs.push_back({w.name(), w, ""});
    }
    inputs.push_back({"missing", std::nullopt, "/nonexistent/file.wcsp"});
    BatchOptions opts;
    opts.jobs = 4;
    opts.seed = 3;
    auto configs = parseMatrix("");
    auto rows = runBatch(inputs, configs, opts);
    ASSERT_EQ(rows.size(), 96u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].instance, inputs[i / 32].id);
        EXPECT_EQ(rows[i].config, configs[i % 32]);
        EXPECT_EQ(rows[i].seed, 3u);
        EXPECT_EQ(rows[i].status, i < 64 ? RunStatus::Optimal : RunStatus::Error);
    }

    // rerun: identical except timing columns
    auto again = runBatch(inputs, configs, opts);
    auto strip = [](std::vector<BenchRow> rs) {
        for (auto& r : rs) r.hvTimeMs = r.satTimeMs = r.improveTimeMs = r.totalTimeMs = 0;
        std::ostringstream s;
        writeCsv(s, rs);
        return s.str();
    };
    EXPECT_EQ(strip(rows), strip(again));

    std::ostringstream csv;
    writeCsv(csv, rows);
    std::istringstream in(csv.str());
    auto parsed = readCsv(in);
    for (auto kind : {TableKind::TimeRatio, TableKind::CoreRatio, TableKind::Speedup}) {
        TableOptions o;
        o.kind = kind;
        EXPECT_NO_THROW(renderTable(parsed, o));
    }
}
