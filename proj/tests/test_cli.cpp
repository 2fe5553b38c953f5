// Runs the hypgauss executable end to end.

#include "hypgauss/hypgauss.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HYPGAUSS_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("hypgauss_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

} // namespace

TEST_F(Cli, GenRoundTripsThroughLoader) {
    ASSERT_EQ(run("gen --kind mhpsk --m 8 --radius 1 --out " + path("h.json")).status, 0);
    const auto c = hypgauss::load_constellation(path("h.json"));
    const auto ref = hypgauss::make_mhpsk(8, 1.0);
    EXPECT_EQ(c.signals(), ref.signals());
    EXPECT_TRUE(c.neighbors());
    EXPECT_TRUE(c.geometrically_uniform());
    const auto r = run("gen --kind mpsk --m 4 --radius 2");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(hypgauss::parse_constellation(r.out).signals(), hypgauss::make_mpsk(4, 2.0).signals());
}

TEST_F(Cli, BoundOutputsAreExact) {
    ASSERT_EQ(run("gen --kind mhpsk --m 8 --radius 1 --out " + path("h.json")).status, 0);
    const auto c = hypgauss::ensure_neighbors(hypgauss::make_mhpsk(8, 1.0));
    const double lib = hypgauss::union_bound(c, 0.25, hypgauss::PairMode::Neighbors).mean_bound;
    const auto r = run("bound --constellation " + path("h.json") + " --sigma2 0.25 --mode neighbors");
    ASSERT_EQ(r.status, 0);
    const auto pos = r.out.find("mean_bound ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_EQ(std::stod(r.out.substr(pos + 11)), lib);
    const auto csv = run("bound --constellation " + path("h.json") + " --sigma2 0.25 --mode gu --csv");
    EXPECT_EQ(csv.status, 0);
    EXPECT_NE(csv.out.find("mean,,,," + hypgauss::format_double(lib)), std::string::npos);
}

TEST_F(Cli, BoundErrorsExitNonzero) {
    ASSERT_EQ(run("gen --kind mhpsk --m 8 --radius 1 --out " + path("h.json")).status, 0);
    EXPECT_NE(run("bound --constellation " + path("h.json") + " --sigma2 0.25 --mode bhattacharyya").status, 0);
    EXPECT_NE(run("bound --constellation " + path("missing.json") + " --sigma2 0.25").status, 0);
    EXPECT_NE(run("bound --constellation " + path("h.json") + " --sigma2 -1").status, 0);
    EXPECT_NE(run("bound --constellation " + path("h.json") + " --sigma2 0.25 --mode fancy").status, 0);
    EXPECT_NE(run("").status, 0);
}

TEST_F(Cli, PdfEvalAndNormalize) {
    const auto k = run("normalize --n 2 --sigma2 1 --verify");
    ASSERT_EQ(k.status, 0);
    EXPECT_NE(k.out.find("k " + hypgauss::format_double(hypgauss::normalization_constant(2, 1.0))), std::string::npos);
    EXPECT_NE(k.out.find("closed_form"), std::string::npos);
    const auto p = run("pdf-eval --n 2 --sigma2 1 --point 0,1");
    ASSERT_EQ(p.status, 0);
    EXPECT_NE(p.out.find("pdf " + hypgauss::format_double(hypgauss::normalization_constant(2, 1.0))),
              std::string::npos);
    EXPECT_EQ(run("pdf-eval --n 1 --sigma2 1 --mean 2 --point 2").status, 0);
    EXPECT_NE(run("pdf-eval --n 2 --sigma2 1 --point 0,-1").status, 0);
    EXPECT_NE(run("pdf-eval --n 2 --sigma2 1 --point 0,1,2").status, 0);
    EXPECT_NE(run("normalize --n 1 --sigma2 1").status, 0);
}

TEST_F(Cli, SweepIsWorkerInvariantAndAtomic) {
    ASSERT_EQ(run("gen --kind mhpsk --m 8 --radius 1 --out " + path("h.json")).status, 0);
    const std::string base = "sweep --constellation " + path("h.json") + " --grid 0.1:0.3:0.1 --trials 3000 --seed 5";
    ASSERT_EQ(run(base + " --workers 1 --csv " + path("a.csv")).status, 0);
    ASSERT_EQ(run(base + " --workers 4 --csv " + path("b.csv")).status, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(a, run(base).out);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 3 * 9);
    // a failed run leaves no file behind
    EXPECT_NE(run("sweep --constellation " + path("h.json") + " --grid 0.1:0.3:-1 --csv " + path("c.csv")).status, 0);
    EXPECT_FALSE(fs::exists(path("c.csv")));
    EXPECT_FALSE(fs::exists(path("c.csv.partial")));
}

TEST_F(Cli, WorkersFromEnvironment) {
    ASSERT_EQ(run("gen --kind mhpsk --m 8 --radius 1 --out " + path("h.json")).status, 0);
    const std::string base = "simulate --constellation " + path("h.json") + " --sigma2 0.25 --trials 2000";
    EXPECT_EQ(run(base).out, run(base + " --workers 2").out);
    EXPECT_NE(std::system(("HYPGAUSS_WORKERS=0 " + std::string(HYPGAUSS_CLI) + " " + base + " >/dev/null 2>&1").c_str()),
              0);
}

TEST_F(Cli, ConfigFileFeedsOptions) {
    ASSERT_EQ(run("gen --kind mpsk --m 8 --radius 1 --out " + path("p.json")).status, 0);
    {
        std::ofstream cfg(path("run.ini"));
        cfg << "[bound]\nconstellation=" << path("p.json") << "\nsigma2=0.5\nmode=bhattacharyya\n";
    }
    const auto r = run("--config " + path("run.ini") + " bound");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("mode bhattacharyya"), std::string::npos);
    const auto flag = run("--config " + path("run.ini") + " bound --sigma2 0.25");
    EXPECT_NE(flag.out.find("sigma2 0.25"), std::string::npos);
}

TEST_F(Cli, CompareJoinsTwoFiles) {
    ASSERT_EQ(run("gen --kind mhpsk --m 8 --radius 1 --out " + path("h.json")).status, 0);
    ASSERT_EQ(run("gen --kind mpsk --m 8 --radius 1 --out " + path("p.json")).status, 0);
    const auto r = run("compare --constellation " + path("h.json") + " --constellation " + path("p.json") +
                       " --labels hpsk,psk --sigma2 0.25 0.5 --bounds-only");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("sigma2,hpsk_p_hat", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}
