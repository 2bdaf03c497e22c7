#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mstn/instance.hpp"
#include "mstn/sha256.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in) << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(MSTN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mstn_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, GenIsDeterministicAndHashed) {
  const fs::path out1 = dir_ / "a";
  const fs::path out2 = dir_ / "b";
  ASSERT_EQ(run("gen --n 5 --dim 2 --scenarios 1,2 --count 2 --seed-base 3 --out " +
                out1.string()),
            0);
  ASSERT_EQ(run("gen --n 5 --dim 2 --scenarios 1,2 --count 2 --seed-base 3 --out " +
                out2.string()),
            0);
  const json manifest = json::parse(slurp(out1 / "manifest.json"));
  ASSERT_EQ(manifest.at("instances").size(), 4u);
  for (const json& entry : manifest.at("instances")) {
    const std::string name = entry.at("path").get<std::string>();
    const std::string body1 = slurp(out1 / name);
    EXPECT_EQ(body1, slurp(out2 / name));
    EXPECT_EQ(mstn::sha256_hex(body1), entry.at("sha256").get<std::string>());
    (void)mstn::load_instance(body1);  // validates
  }
  EXPECT_EQ(slurp(out1 / "manifest.json"), slurp(out2 / "manifest.json"));
}

TEST_F(CliTest, SolveWritesValidReport) {
  const fs::path inst_path = dir_ / "example1.mstn.json";
  mstn::save_instance_file(mstn::example1(), inst_path.string());
  const fs::path report_path = dir_ / "report.json";
  const fs::path svg_path = dir_ / "tree.svg";
  ASSERT_EQ(run("solve " + inst_path.string() + " --method exact-bc --out " +
                report_path.string() + " --svg " + svg_path.string()),
            0);
  const json report = json::parse(slurp(report_path));
  EXPECT_EQ(report.at("method"), "exact-bc");
  EXPECT_EQ(report.at("status"), "Optimal");
  EXPECT_EQ(report.at("tree_edges").size(), 7u);
  EXPECT_TRUE(report.contains("git_revision"));
  EXPECT_TRUE(report.contains("options"));
  EXPECT_NE(slurp(svg_path).find("<svg"), std::string::npos);
}

TEST_F(CliTest, SolveTimeLimitKeepsIncumbent) {
  const fs::path inst_path = dir_ / "inst.mstn.json";
  mstn::GeneratorConfig cfg;
  cfg.n = 7;
  cfg.dimension = 2;
  cfg.radii_scenario = 4;
  cfg.seed = 99;
  mstn::save_instance_file(mstn::generate(cfg), inst_path.string());
  const fs::path report_path = dir_ / "report.json";
  ASSERT_EQ(run("solve " + inst_path.string() +
                " --method exact-bc --time-limit 0.0 --out " + report_path.string()),
            0);
  const json report = json::parse(slurp(report_path));
  EXPECT_EQ(report.at("status"), "TimeLimit");
  EXPECT_GT(report.at("objective").get<double>(), 0.0);
}

TEST_F(CliTest, ExportAndBenchRun) {
  const fs::path gen_dir = dir_ / "suite";
  ASSERT_EQ(run("gen --n 5 --dim 2 --scenarios 1 --count 2 --seed-base 11 --out " +
                gen_dir.string()),
            0);
  const json manifest = json::parse(slurp(gen_dir / "manifest.json"));
  const std::string first =
      (gen_dir / manifest.at("instances")[0].at("path").get<std::string>()).string();
  const fs::path cbf = dir_ / "model.cbf";
  ASSERT_EQ(run("export " + first + " --format mtz --out " + cbf.string()), 0);
  EXPECT_NE(slurp(cbf).find("OBJSENSE"), std::string::npos);

  const fs::path csv = dir_ / "bench.csv";
  ASSERT_EQ(run("bench --manifest " + (gen_dir / "manifest.json").string() +
                " --methods heuristic,enumerate --out " + csv.string()),
            0);
  const std::string body = slurp(csv);
  EXPECT_EQ(body.substr(0, body.find('\n')),
            "r,n,method,cpu_s,sec_cuts,benders_cuts,nodes,gap0_pct,gap_pct,solved_pct,obj,lb,ub");
  // 2 instances x 2 methods rows + header
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(csv.string() + ".aggregate.csv"));
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(mstn::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(mstn::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(mstn::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

}  // namespace
