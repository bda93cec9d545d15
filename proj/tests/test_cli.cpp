// End-to-end checks of the command-line tool through the shell.

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string("\"") + BUBBLEUQ_CLI_PATH + "\" " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("bubbleuq_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return "\"" + (dir / name).string() + "\""; }
    fs::path dir;
};

const char* kBlockCsv = "0,0,0,0,0\n0,1,1,1,0\n0,1,1,1,0\n0,1,1,1,0\n0,0,0,0,0\n";

} // namespace

TEST_F(Cli, MetricsAllDryFrame) {
    write(dir / "dry.pgm", "P2\n3 2\n255\n255 255 255\n255 255 255\n");
    const Result r = run("metrics " + path("dry.pgm"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "frame_id,theta_dry,rho_cl_pixel,rho_cl_physical\ndry.pgm,1,0,\n");
}

TEST_F(Cli, MetricsMissingFileIsPartialFailure) {
    write(dir / "a.csv", kBlockCsv);
    write(dir / "c.csv", "1,0\n");
    const Result r = run("metrics " + path("a.csv") + " " + path("b.csv") + " " + path("c.csv"));
    EXPECT_EQ(r.code, 1);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[1], "a.csv,0.36,0.32,");
    EXPECT_EQ(l[2], "c.csv,0.5,0.5,");
}

TEST_F(Cli, MetricsDirectorySortedByName) {
    write(dir / "frames" / "f10.csv", "1\n");
    write(dir / "frames" / "f02.csv", "0\n");
    write(dir / "frames" / "f01.pgm", "P2 1 1 1 1");
    write(dir / "frames" / "notes.txt", "ignored");
    const Result r = run("metrics " + path("frames") + " --resolution 2 --format json");
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 3u);
    EXPECT_EQ(j[0]["frame_id"], "f01.pgm");
    EXPECT_EQ(j[1]["frame_id"], "f02.csv");
    EXPECT_EQ(j[2]["frame_id"], "f10.csv");
    EXPECT_EQ(j[0]["rho_cl_physical"].get<double>(), 0.0);
}

TEST_F(Cli, SimulateFortyRowsAndRepeatable) {
    const std::string args = "simulate --cells 12.6 --radii 5:200:5 --iters 20000 --seed 7 -o ";
    ASSERT_EQ(run(args + path("a.csv")).code, 0);
    ASSERT_EQ(run(args + path("b.csv")).code, 0);
    const std::string a = slurp(dir / "a.csv");
    EXPECT_EQ(lines(a).size(), 41u);
    EXPECT_EQ(a, slurp(dir / "b.csv"));
    const auto m = nlohmann::json::parse(slurp(dir / "a.csv.manifest.json"));
    EXPECT_EQ(m["command"], "simulate");
    EXPECT_EQ(m["seed"].get<int>(), 7);
    EXPECT_EQ(m["config"]["iters"].get<int>(), 20000);
    EXPECT_EQ(m["config"]["radii"].size(), 40u);
    EXPECT_TRUE(m.contains("wall_seconds"));
    EXPECT_EQ(m["version"], BUBBLEUQ_VERSION);
}

TEST_F(Cli, SimulateThreadCountDoesNotChangeOutput) {
    ASSERT_EQ(run("simulate --cells 5,25 --radii 5:100:5 --iters 300 --threads 1 -o " + path("t1.csv")).code, 0);
    ASSERT_EQ(run("simulate --cells 5,25 --radii 5:100:5 --iters 300 --threads 4 -o " + path("t4.csv")).code, 0);
    EXPECT_EQ(slurp(dir / "t1.csv"), slurp(dir / "t4.csv"));
    const std::string env = "BUBBLEUQ_THREADS=3 ";
    const std::string cmd = env + "\"" + BUBBLEUQ_CLI_PATH + "\" simulate --cells 5,25 --radii 5:100:5 --iters 300 -o " +
                            path("env.csv");
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(slurp(dir / "t1.csv"), slurp(dir / "env.csv"));
}

TEST_F(Cli, SimulateUsageErrorsBeforeCompute) {
    EXPECT_EQ(run("simulate --cells 0:10:5 -o " + path("x.csv")).code, 2);
    EXPECT_EQ(run("simulate --radii 5:600:5").code, 2);
    EXPECT_EQ(run("simulate --cells 10,10").code, 2);
    EXPECT_EQ(run("simulate --boundary open").code, 2);
    EXPECT_EQ(run("simulate --iters 0").code, 2);
    EXPECT_EQ(run("simulate --nope").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_FALSE(fs::exists(dir / "x.csv"));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
    write(dir / "sim.conf", "# small sweep\ncells = 10\nradii = 20,40\niters = 50\nseed = 3\n");
    ASSERT_EQ(run("simulate --config " + path("sim.conf") + " --seed 4 -o " + path("c.csv")).code, 0);
    ASSERT_EQ(run("simulate --cells 10 --radii 20,40 --iters 50 --seed 4 -o " + path("d.csv")).code, 0);
    EXPECT_EQ(slurp(dir / "c.csv"), slurp(dir / "d.csv"));
    write(dir / "bad.conf", "colour = blue\n");
    EXPECT_EQ(run("simulate --config " + path("bad.conf")).code, 2);
    EXPECT_EQ(run("simulate --config " + path("missing.conf")).code, 2);
}

TEST_F(Cli, ReplayReproducesOutputs) {
    ASSERT_EQ(run("simulate --cells 15 --radii 10:50:10 --iters 200 --seed 11 -o " + path("m.csv")).code, 0);
    const std::string manifest = path("m.csv.manifest.json");
    Result r = run("replay " + manifest + " --check");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("identical"), std::string::npos);
    const std::string original = slurp(dir / "m.csv");
    write(dir / "m.csv", original + "tampered\n");
    EXPECT_EQ(run("replay " + manifest + " --check").code, 1);
    EXPECT_EQ(run("replay " + manifest).code, 0);
    EXPECT_EQ(slurp(dir / "m.csv"), original);
    EXPECT_EQ(run("replay " + path("none.json")).code, 2);
}

TEST_F(Cli, CalibrateOneBinHistogram) {
    write(dir / "h.csv", "lo,hi,count\n20,30,12\n");
    const Result r = run("calibrate --histogram " + path("h.csv") + " --cell-size 10 --radii 5:50:5 --iters 200");
    EXPECT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5u);  // two comments, header, one row, summary
    EXPECT_EQ(l[2], "sn,frequency,area_pre,area_me,perim_pre,perim_me,bin_lo,bin_hi,matched_r");
    EXPECT_EQ(l[3].substr(0, 5), "1,12,");
    EXPECT_EQ(l[3].substr(l[3].size() - 9), ",20,30,25");
    EXPECT_EQ(l[4].substr(0, 11), "summary,12,");
}

TEST_F(Cli, CalibrateArgonCompareBoundary) {
    std::string h = "lo,hi,count\n";
    const int counts[] = {184, 110, 59, 31, 11, 7, 3, 2};
    for (int i = 0; i < 8; ++i) {
        h += std::to_string(5 + 24.375 * i) + "," + std::to_string(5 + 24.375 * (i + 1)) + "," +
             std::to_string(counts[i]) + "\n";
    }
    write(dir / "argon.csv", h);
    const Result plain = run("calibrate --histogram " + path("argon.csv") + " --cell-size 12.6 --iters 2000");
    ASSERT_EQ(plain.code, 0);
    const auto summary = lines(plain.out).back();
    EXPECT_EQ(summary.substr(0, 12), "summary,407,");
    // perim_pre is the fifth column.
    std::vector<std::string> cells;
    std::stringstream ss(summary);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    EXPECT_LT(std::stod(cells.at(4)), 0.0);

    const Result cmp = run("calibrate --histogram " + path("argon.csv") +
                           " --cell-size 12.6 --iters 2000 --compare-boundary -o " + path("cmp.csv"));
    ASSERT_EQ(cmp.code, 0);
    const auto l = lines(slurp(dir / "cmp.csv"));
    ASSERT_EQ(l.size(), 6u);
    EXPECT_EQ(l[1], "column,erode,dilate");
    EXPECT_EQ(l[4].substr(0, 10), "perim_pre,");
    EXPECT_TRUE(fs::exists(dir / "cmp.erode.csv"));
    EXPECT_TRUE(fs::exists(dir / "cmp.dilate.csv"));
    EXPECT_TRUE(fs::exists(dir / "cmp.csv.manifest.json"));

    // The same run from saved matrices gives the same comparison.
    ASSERT_EQ(run("simulate --cells 12.6 --iters 2000 --boundary erode -o " + path("e.csv")).code, 0);
    ASSERT_EQ(run("simulate --cells 12.6 --iters 2000 --boundary dilate -o " + path("d.csv")).code, 0);
    const Result saved = run("calibrate --histogram " + path("argon.csv") + " --cell-size 12.6 --compare-boundary" +
                             " --matrix-erode " + path("e.csv") + " --matrix-dilate " + path("d.csv"));
    ASSERT_EQ(saved.code, 0);
    EXPECT_EQ(saved.out, slurp(dir / "cmp.csv"));
}

TEST_F(Cli, CalibrateUsageErrors) {
    write(dir / "block.csv", kBlockCsv);
    write(dir / "h.csv", "lo,hi,count\n20,30,12\n");
    EXPECT_EQ(run("calibrate --mask " + path("block.csv")).code, 2);  // no resolution anywhere
    EXPECT_EQ(run("calibrate --histogram " + path("h.csv")).code, 2);   // no cell size
    EXPECT_EQ(run("calibrate --histogram " + path("h.csv") + " --mask " + path("block.csv")).code, 2);
    ASSERT_EQ(run("simulate --cells 10,15 --radii 5,25 --iters 10 -o " + path("m.csv")).code, 0);
    EXPECT_EQ(run("calibrate --histogram " + path("h.csv") + " --cell-size 12.6 --matrix " + path("m.csv")).code, 2);
    write(dir / "broken.csv", "lo,hi,count\n20,10,1\n");
    EXPECT_EQ(run("calibrate --histogram " + path("broken.csv") + " --cell-size 10 --iters 10").code, 1);
}

TEST_F(Cli, CalibrateFromMaskUsesEmbeddedResolution) {
    write(dir / "m.csv", std::string("# resolution: 10\n") + kBlockCsv);
    const Result r = run("calibrate --mask " + path("m.csv") + " --bins 1 --radii 5:50:5 --iters 100");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("# cell_size: 10"), std::string::npos);
}

TEST_F(Cli, EvaluateIdenticalDirectories) {
    write(dir / "p" / "a.csv", kBlockCsv);
    write(dir / "p" / "b.csv", "1,0\n0,1\n");
    write(dir / "t" / "a.csv", kBlockCsv);
    write(dir / "t" / "b.csv", "1,0\n0,1\n");
    const Result r = run("evaluate --pred " + path("p") + " --truth " + path("t") + " --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["frames"].size(), 2u);
    for (const auto& f : j["frames"]) {
        for (const auto& [k, v] : f["metrics"].items()) EXPECT_EQ(v.get<double>(), 1.0) << k;
    }
    EXPECT_EQ(j["micro"]["mcc"].get<double>(), 1.0);
}

TEST_F(Cli, EvaluateSevenPixelPair) {
    write(dir / "pred.csv", "1,1,1,0,0,0,0\n");
    write(dir / "truth.csv", "1,1,0,1,0,0,0\n");
    const Result r = run("evaluate --pred " + path("pred.csv") + " --truth " + path("truth.csv") +
                         " --modality LAr --model test");
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    EXPECT_EQ(l[0], "modality,model,frame,tp,tn,fp,fn,accuracy,precision,recall,specificity,f1,iou,mcc");
    EXPECT_EQ(l[1], "LAr,test,pred.csv,2,3,1,1,0.7142857142857143,0.6666666666666666,0.6666666666666666,0.75,"
                    "0.6666666666666666,0.5,0.4166666666666667");
}

TEST_F(Cli, EvaluatePairingErrors) {
    write(dir / "a.csv", "1,0\n");
    write(dir / "b.csv", "1,0,1\n");
    EXPECT_EQ(run("evaluate --pred " + path("a.csv") + " " + path("a.csv") + " --truth " + path("a.csv")).code, 2);
    const std::string cmd = std::string("\"") + BUBBLEUQ_CLI_PATH + "\" evaluate --pred " + path("a.csv") + " " +
                            path("a.csv") + " --truth " + path("b.csv") + " " + path("a.csv") + " 2>&1 >/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string err;
    std::array<char, 512> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) err.append(buf.data(), n);
    const int status = pclose(p);
    EXPECT_EQ(WEXITSTATUS(status), 1);
    EXPECT_NE(err.find("b.csv"), std::string::npos);
}

TEST_F(Cli, BubblesTableHistogramAndSvg) {
    write(dir / "block.csv", kBlockCsv);
    const Result table = run("bubbles " + path("block.csv"));
    ASSERT_EQ(table.code, 0);
    EXPECT_EQ(table.out, "frame,label,area_px,perimeter_px,area_phys,perimeter_phys,equiv_radius_phys\nblock.csv,1,9,12,,,\n");

    ASSERT_EQ(run("bubbles " + path("block.csv") + " --field area --bins 2 --histogram " + path("h.csv") + " -o " +
                  path("t.csv"))
                  .code,
              0);
    const std::string hist = slurp(dir / "h.csv");
    ASSERT_EQ(run("bubbles " + path("block.csv") + " --field area --bins 2 --histogram " + path("h2.csv") +
                  " --svg " + path("h.svg") + " -o " + path("t2.csv"))
                  .code,
              0);
    EXPECT_EQ(slurp(dir / "h2.csv"), hist);
    EXPECT_EQ(slurp(dir / "t2.csv"), slurp(dir / "t.csv"));
    EXPECT_NE(slurp(dir / "h.svg").find("<svg"), std::string::npos);
}

TEST_F(Cli, BubblesGroupedDistribution) {
    write(dir / "q1.csv", "1,0,0,0\n0,0,0,0\n0,0,1,1\n0,0,1,1\n");
    write(dir / "q2.csv", "1,1,1,0\n1,1,1,0\n1,1,1,0\n0,0,0,0\n");
    const Result r = run("bubbles " + path("q1.csv") + " " + path("q2.csv") +
                         " --field area --bins 3 --range 0:9 --group-values 100,200 --grouped " + path("g.csv"));
    ASSERT_EQ(r.code, 0);
    const auto l = lines(slurp(dir / "g.csv"));
    ASSERT_EQ(l.size(), 8u);
    EXPECT_EQ(l[1], "group,bin,lo,hi,count");
    EXPECT_EQ(l[2], "100,0,0,3,1");
    EXPECT_EQ(l[3], "100,1,3,6,1");
    EXPECT_EQ(l[7], "200,2,6,9,1");
    EXPECT_EQ(run("bubbles " + path("q1.csv") + " --group-values 1,2 --grouped " + path("x.csv")).code, 2);
}

TEST_F(Cli, ConvergenceTrace) {
    const Result r = run("convergence --cell-size 12.6 --radius 50 --milestones 5000,10000,15000,20000 --svg " +
                         path("t.svg"));
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[0], "iterations,mean_area,mean_perim,pre_area,pre_perim");
    EXPECT_EQ(l[4].substr(0, 6), "20000,");
    EXPECT_TRUE(fs::exists(dir / "t.svg"));
    EXPECT_EQ(run("convergence --cell-size 12.6 --radius 50 --milestones 10,5").code, 2);
    EXPECT_EQ(run("convergence --cell-size 12.6 --radius 600").code, 2);
}
