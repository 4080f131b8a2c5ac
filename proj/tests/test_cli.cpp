// Copyright 2026 The riskeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "riskeq/json_io.hpp"

namespace riskeq::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = RISKEQ_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("riskeq_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, CrawfordHasNoEquilibrium) {
  ASSERT_EQ(call({"gadget", "crawford", "--delta", "1/4", "-o", path("g.json")}).code, kExitOk);
  auto r = call({"solve", "--method", "support2p", "--valuation", "e+var:gamma=1", path("g.json")});
  EXPECT_EQ(r.code, kExitNegative);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["config"]["method"], "support2p");
  EXPECT_TRUE(j["result"]["found"].empty());
  EXPECT_EQ(j["result"]["exhausted"], true);
}

TEST_F(Cli, SatLiftVerifyRoundTrip) {
  const std::string cnf = kData + "/phi.cnf";
  ASSERT_EQ(call({"gadget", "sat", "--cnf", cnf, "-o", path("sat.json")}).code, kExitOk);
  ASSERT_EQ(call({"lift", "sat-assignment", "--cnf", cnf, "--assign", "11", "-o", path("p.json")}).code, kExitOk);
  auto r = call({"verify", "--game", path("sat.json"), "--profile", path("p.json"), "--mode", "exact"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["result"]["verdict"], "equilibrium");
  EXPECT_EQ(j["result"]["players"][0]["value"], "1");
}

TEST_F(Cli, ViolatedProfileExitsOne) {
  ASSERT_EQ(call({"gadget", "crawford", "--delta", "1/4", "-o", path("g.json")}).code, kExitOk);
  std::ofstream(path("p.json")) << R"({"probabilities": [["1","0"],["1","0"]]})";
  auto r = call({"verify", "--game", path("g.json"), "--profile", path("p.json")});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_EQ(Json::parse(r.out)["result"]["result"]["verdict"], "violated");
}

TEST_F(Cli, MbpChain) {
  ASSERT_EQ(call({"gadget", "mbp-from-3dm", kData + "/tdm_q1.txt", "-o", path("mbp.json")}).code, kExitOk);
  ASSERT_EQ(call({"gadget", "sched-from-mbp", path("mbp.json"), "-o", path("s.json")}).code, kExitOk);
  auto lift = call({"lift", "mbp-solution", path("mbp.json"), "--rows", "1,2", "-o", path("p.json")});
  ASSERT_EQ(lift.code, kExitOk) << lift.err;
  EXPECT_EQ(call({"verify", "--game", path("s.json"), "--profile", path("p.json")}).code, kExitOk);
  auto grid = call({"solve", path("s.json"), "--method", "grid", "--resolution", "1", "--seed-profile",
                    path("p.json"), "--workers", "2"});
  EXPECT_EQ(grid.code, kExitOk) << grid.err;
  auto bad = call({"lift", "mbp-solution", path("mbp.json"), "--rows", "1"});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_NE(bad.err.find("error[input]"), std::string::npos);
}

TEST_F(Cli, ThreePlayerDynamicsCycles) {
  ASSERT_EQ(call({"gadget", "three-player", "-o", path("t.json")}).code, kExitOk);
  auto r = call({"solve", path("t.json"), "--method", "dynamics", "--start", "0,0,0"});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_EQ(Json::parse(r.out)["result"]["outcome"], "cycle");
  EXPECT_EQ(call({"solve", path("t.json"), "--method", "pure"}).code, kExitNegative);
}

TEST_F(Cli, Checks) {
  auto r = call({"check", "risk-positivity", "--valuation", "nu:r=3", "--samples", "100"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["result"]["passed"], true);
  EXPECT_EQ(call({"check", "fp-counterexample"}).code, kExitOk);
  EXPECT_EQ(call({"check", "conditions-2ab", "--valuation", "e+sd:gamma=1"}).code, kExitOk);
  EXPECT_EQ(call({"check", "f-identities"}).code, kExitOk);
}

TEST_F(Cli, ErrorsAreCategorised) {
  auto usage = call({"frobnicate"});
  EXPECT_EQ(usage.code, kExitError);
  EXPECT_NE(usage.err.find("error[usage]"), std::string::npos);

  auto io = call({"verify", "--game", path("missing.json"), "--profile", path("missing.json")});
  EXPECT_EQ(io.code, kExitError);
  EXPECT_NE(io.err.find("error[io]"), std::string::npos);

  std::ofstream(path("bad.cnf")) << "p cnf 1 2\n1 0\n";
  auto parse = call({"gadget", "sat", "--cnf", path("bad.cnf")});
  EXPECT_EQ(parse.code, kExitError);
  EXPECT_NE(parse.err.find("error[parse]"), std::string::npos);

  std::ofstream(path("bad.json")) << "{\"players\": 2}";
  auto schema = call({"solve", path("bad.json")});
  EXPECT_EQ(schema.code, kExitError);
  EXPECT_NE(schema.err.find("error[schema]"), std::string::npos);

  auto spec = call({"check", "conditions-2ab", "--valuation", "e+var:gamma=0"});
  EXPECT_EQ(spec.code, kExitError);
  EXPECT_NE(spec.err.find("error[schema]"), std::string::npos);

  auto unknown = call({"check", "nonsense"});
  EXPECT_EQ(unknown.code, kExitError);
  EXPECT_NE(unknown.err.find("error[input]"), std::string::npos);
}

TEST_F(Cli, HelpExitsZero) {
  auto r = call({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("gadget"), std::string::npos);
}

}  // namespace
}  // namespace riskeq::cli
