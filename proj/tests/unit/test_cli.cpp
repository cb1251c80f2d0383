#include "clate/json_io.hpp"
#include "clate/ordered.hpp"
#include "clate/representation.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace clate {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("clate_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(CLATE_CLI_PATH) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string m1_path() { return std::string(CLATE_TEST_DATA) + "/m1.json"; }

  fs::path dir_;
};

TEST_F(Cli, AuditM1Passes) {
  EXPECT_EQ(run("--format json --out " + path("r.json") + " audit --input " + m1_path()), 0);
  const auto report = Json::parse(slurp("r.json"));
  EXPECT_EQ(report["verdict"], "pass");
  EXPECT_EQ(report["input_kind"], "population");
  EXPECT_EQ(report["input_digest"].get<std::string>().size(), 64u);
}

TEST_F(Cli, AuditM2Fails) {
  write("m2.json", dump_canonical(model_to_json(testing::m2())));
  EXPECT_EQ(run("audit --input " + path("m2.json")), 1);
  EXPECT_EQ(Json::parse(slurp("stdout"))["verdict"], "fail");
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("audit --input " + path("missing.json")), 2);
  write("bad.json", "{ not json");
  EXPECT_EQ(run("audit --input " + path("bad.json")), 2);
  write("bad.csv", "x,z,y\na,0,1\n");
  EXPECT_EQ(run("audit --input " + path("bad.csv")), 2);
  EXPECT_EQ(run("--format yaml audit --input " + m1_path()), 2);
  EXPECT_EQ(run("--tol -1 audit --input " + m1_path()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
}

TEST_F(Cli, RepresentThenCheckModel) {
  EXPECT_EQ(run("--out " + path("rep.json") + " represent --model " + m1_path()), 0);
  EXPECT_EQ(run("check-model --model " + m1_path() + " --rep " + path("rep.json")), 0);
  const auto out = Json::parse(slurp("stdout"));
  EXPECT_EQ(out["monotonicity"], "GlobalMonotone");
  EXPECT_EQ(out["representation"]["ok"], true);

  // Swap the index values: the representation no longer reproduces D.
  auto rep = Json::parse(slurp("rep.json"));
  std::swap(rep["m"]["z0"], rep["m"]["z1"]);
  write("tampered.json", dump_canonical(rep));
  EXPECT_EQ(run("check-model --model " + m1_path() + " --rep " + path("tampered.json")), 1);
  EXPECT_EQ(Json::parse(slurp("stdout"))["representation"]["ok"], false);
}

TEST_F(Cli, RepresentRefusesLocalOnly) {
  write("m2.json", dump_canonical(model_to_json(testing::m2())));
  EXPECT_EQ(run("represent --model " + path("m2.json")), 1);
  EXPECT_NE(slurp("stdout").find("LocalOnlyMonotone"), std::string::npos);
}

TEST_F(Cli, OrderedSubcommand) {
  write("k3.json", dump_canonical(model_to_json(testing::ordered_k3())));
  EXPECT_EQ(run("ordered --model " + path("k3.json")), 0);
  const auto doc = Json::parse(slurp("stdout"));
  EXPECT_EQ(doc["K"], 3);
  EXPECT_EQ(run("represent --model " + path("k3.json")), 2);
  write("cross.json", dump_canonical(model_to_json(testing::ordered_crossing())));
  EXPECT_EQ(run("ordered --model " + path("cross.json")), 1);
}

TEST_F(Cli, SimulateIsDeterministic) {
  write("spec.json", R"({"class": "GlobalMonotone", "nz": 3, "nx": 2})");
  const std::string args = " simulate --spec " + path("spec.json") + " --n 2000";
  EXPECT_EQ(run("--seed 17 --out " + path("a.csv") + args), 0);
  EXPECT_EQ(run("--seed 17 --out " + path("b.csv") + args), 0);
  EXPECT_EQ(run("--seed 18 --out " + path("c.csv") + args), 0);
  EXPECT_EQ(slurp("a.csv"), slurp("b.csv"));
  EXPECT_NE(slurp("a.csv"), slurp("c.csv"));
  EXPECT_EQ(slurp("a.csv").rfind("x,z,d,y\n", 0), 0u);

  EXPECT_EQ(run("--out " + path("r1.json") + " audit --input " + path("a.csv")), 0);
  EXPECT_EQ(run("--out " + path("r2.json") + " audit --input " + path("b.csv")), 0);
  EXPECT_EQ(slurp("r1.json"), slurp("r2.json"));
}

TEST_F(Cli, SimulateModelOutput) {
  write("spec.json", R"({"class": "LocalOnly", "nz": 2, "nx": 2, "seed": 4})");
  EXPECT_EQ(run("simulate --spec " + path("spec.json") + " --n 0 --out " + path("model.json")), 0);
  EXPECT_EQ(run("check-model --model " + path("model.json")), 0);
  EXPECT_EQ(Json::parse(slurp("stdout"))["monotonicity"], "LocalOnlyMonotone");
  write("bad_spec.json", R"({"class": "Sideways"})");
  EXPECT_EQ(run("simulate --spec " + path("bad_spec.json")), 2);
}

TEST_F(Cli, CsvColumnsAndBins) {
  write("data.csv", "region,offer,took,earn\nr,a,0,0.2\nr,b,1,0.7\n");
  EXPECT_EQ(run("audit --input " + path("data.csv") +
                " --x-column region --z-column offer --d-column took --y-column earn --y-bins 0,0.5,1"),
            0);
  EXPECT_EQ(run("audit --input " + path("data.csv") + " --x-column region --z-column offer --d-column took "
                                                      "--y-column earn"),
            2);
}

}  // namespace
}  // namespace clate
