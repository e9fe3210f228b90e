#include "focsim/experiments.hpp"
#include "focsim/io/config.hpp"
#include "focsim/io/reports.hpp"
#include "focsim/io/table.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace focsim;
using namespace focsim::io;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + FOCSIM_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("focsim_cli_test_" + name);
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(Cli, SimulateIdealHasZeroError) {
    const auto r = run("simulate --rotation-rad 0.1");
    ASSERT_EQ(r.status, 0);
    const auto t = parse_csv_table(r.out);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.columns[4].name, "relative_error_pct");
    EXPECT_EQ(std::get<double>(t.rows[0][4]), 0.0);
    EXPECT_EQ(*t.meta("constants"), AssumedConstants{}.fingerprint());
}

TEST(Cli, SimulateImperfectMatchesLibrary) {
    const auto r = run("simulate --rho-rad 1.5707963267948966 --beta-rad 0.017453292519943295 --rotation-rad 0.1");
    ASSERT_EQ(r.status, 0);
    const auto t = parse_csv_table(r.out);
    EXPECT_NEAR(std::get<double>(t.rows[0][4]), -0.060898743504465835, 1e-10);
}

TEST(Cli, SweepXiMatchesLibraryByteForByte) {
    const auto r = run("sweep-xi --ratios 1,3,5,10 --profiles linear,cosine --segments 20000");
    ASSERT_EQ(r.status, 0);
    const AssumedConstants c;
    XiSweepOptions opt;
    opt.segments = 20000;
    opt.conversion_threshold = c.conversion_threshold;
    const auto rows = run_xi_sweep(default_medium(c), {1, 3, 5, 10}, {ProfileKind::linear, ProfileKind::cosine}, opt);
    EXPECT_EQ(r.out, render(xi_sweep_table(c, opt, rows), Format::csv));
    EXPECT_EQ(parse_csv_table(r.out).rows.size(), 8u);
}

TEST(Cli, OutputIsIdenticalAcrossRunsAndWorkerCounts) {
    const std::string args = "sweep-xi --ratios 1,3,5,10 --profiles linear,cosine --segments 20000 --format json";
    const auto a = run(args, "FOCSIM_THREADS=1");
    const auto b = run(args, "FOCSIM_THREADS=8");
    const auto c = run(args);
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    const auto t = parse_json_table(a.out);
    EXPECT_EQ(t.rows.size(), 8u);
}

TEST(Cli, SweepCurrentWithConfigAndOutFile) {
    const auto cfg = temp_file("sweep.json", R"({"schema_version": "focsim-config/1",
        "current_sweep": {"front_end": "imperfect_qwp", "n_points": 21, "cut_deviation_m": 0.0005,
                          "splice_deviation_rad": 0.03490658503988659}})");
    const auto out = std::filesystem::temp_directory_path() / "focsim_cli_test_sweep.csv";
    std::filesystem::remove(out);
    const auto r = run("sweep-current --config " + cfg.string() + " --out " + out.string());
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto t = parse_csv_table(text);
    EXPECT_EQ(t.rows.size(), 21u);
    EXPECT_GT(std::stod(*t.meta("max_abs_error_pct")), 0.2);
    EXPECT_EQ(*t.meta("front_end"), "imperfect_qwp");
}

TEST(Cli, ConvergeReportsRatios) {
    const auto r = run("converge --ladder 2000,4000,8000 --reference 64000");
    ASSERT_EQ(r.status, 0);
    const auto t = parse_csv_table(r.out);
    ASSERT_EQ(t.rows.size(), 3u);
    const double ratio = std::get<double>(t.rows[0][2]);
    EXPECT_GT(ratio, 1.0);
    EXPECT_TRUE(std::isnan(std::get<double>(t.rows[2][2])));
}

TEST(Cli, TrajectoryAndPerturbRun) {
    const auto tr = run("trajectory --profile cosine --ratio 3 --segments 3000 --every 100");
    ASSERT_EQ(tr.status, 0);
    EXPECT_EQ(parse_csv_table(tr.out).rows.size(), 31u);
    const auto pe = run("perturb --segments 5000");
    ASSERT_EQ(pe.status, 0);
    EXPECT_EQ(parse_csv_table(pe.out).rows.size(), 4u);
}

TEST(Cli, ConfigErrorsExitTwo) {
    const auto cfg = temp_file("bad.json", R"({"schema_version": "focsim-config/1", "medium": {"lenght_m": 1}})");
    EXPECT_EQ(run("sweep-xi --config " + cfg.string()).status, 2);
    EXPECT_EQ(run("simulate --no-such-flag").status, 2);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("simulate --config /nonexistent/focsim.json").status, 2);
    EXPECT_EQ(run("simulate --format xml").status, 2);
}

TEST(Cli, DomainErrorsExitThree) {
    EXPECT_EQ(run("simulate --rotation-rad 0.78539816339744828").status, 3);
    EXPECT_EQ(run("sweep-xi --ratios 0").status, 3);
}

TEST(Cli, OutputFailureExitsFour) {
    EXPECT_EQ(run("simulate --out /nonexistent-dir/out.csv").status, 4);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").status, 0); }
