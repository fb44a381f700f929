// Copyright 2026 The ionet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "ionet/cli.hpp"
#include "ionet/csv.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace ionet;

namespace {

class Scratch {
 public:
  Scratch() {
    dir_ = fs::temp_directory_path() / ("ionet-cli-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ionet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows_of(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(csv::split_record(line, rows.size() + 1));
  return rows;
}

constexpr const char* kK3 = "sector_id,1,2,3\n1,0,1,1\n2,1,0,1\n3,1,1,0\n";
constexpr const char* kAbsorption =
    "sector_id,label,1,2,3,4\n"
    "1,Farms,0.1,0.05,0.2,0.01\n"
    "2,Mills,0.3,0,0.1,0.05\n"
    "3,Freight,0.05,0.2,0.02,0.1\n"
    "4,Retail,0.01,0.1,0.2,0\n";

}  // namespace

TEST_CASE("rwc on the uniform triangle") {
  Scratch dir;
  const auto flows = dir.write("k3.csv", kK3);
  const auto r = run({"rwc", "--flows", flows, "--out", dir.path("rwc.csv")});
  REQUIRE(r.code == 0);
  CHECK(dir.read("rwc.csv") ==
        "sector_id,description,RWC,rank\n"
        "1,Sector 1,0.75,1\n"
        "2,Sector 2,0.75,1\n"
        "3,Sector 3,0.75,1\n");

  const auto dumped = run({"rwc", "--flows", flows, "--dump-mfpt", dir.path("h.csv")});
  REQUIRE(dumped.code == 0);
  const auto h = rows_of(dir.read("h.csv"));
  REQUIRE(h.size() == 4);
  CHECK(h[1] == std::vector<std::string>{"1", "0", "2", "2"});
}

TEST_CASE("cbet and path measures on the triangle") {
  Scratch dir;
  const auto flows = dir.write("k3.csv", kK3);
  const auto cbet = run({"cbet", "--flows", flows});
  REQUIRE(cbet.code == 0);
  CHECK(rows_of(cbet.out)[1] == std::vector<std::string>{"1", "Sector 1", "1", "1"});

  const auto clo = run({"closeness", "--flows", flows, "--alpha", "0"});
  REQUIRE(clo.code == 0);
  CHECK(rows_of(clo.out)[0][2] == "CLO");
  CHECK(rows_of(clo.out)[1][2] == "0.5");

  const auto wbet = run({"betweenness", "--flows", flows, "--alpha", "1.5", "--format", "json"});
  REQUIRE(wbet.code == 0);
  const auto doc = nlohmann::json::parse(wbet.out);
  CHECK(doc["measure"] == "WBET");
  CHECK(doc["alpha"] == 1.5);
  CHECK(doc["rows"][2]["WBET"] == 0.0);
}

TEST_CASE("rank-all table shape and determinism") {
  Scratch dir;
  const auto flows = dir.write("a.csv", kAbsorption);
  const auto emp = dir.write("emp.csv", "sector_id,value\n1,4\n2,2\n3,1\n4,3\n");
  const auto r = run({"rank-all", "--flows", flows, "--employment", emp, "--alpha", "1"});
  REQUIRE(r.code == 0);
  const auto rows = rows_of(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{
                       "sector_id", "description", "Output Multiplier", "Employment Multiplier",
                       "Random Walk Centrality", "Counting Betweenness Centrality", "Closeness",
                       "Betweenness", "Weighted Closeness (alpha=1)", "Weighted Betweenness (alpha=1)"});
  CHECK(rows[1][1] == "Farms");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == rows[0].size());

  const auto again = run({"rank-all", "--flows", flows, "--employment", emp, "--alpha", "1",
                          "--workers", "3"});
  CHECK(again.out == r.out);

  const auto grid = run({"rank-all", "--flows", flows});
  REQUIRE(grid.code == 0);
  CHECK(rows_of(grid.out)[0].size() == 2 + 1 + 2 + 2 + 6);

  const auto top = run({"rank-all", "--flows", flows, "--top", "2", "--spearman", dir.path("rho.csv")});
  REQUIRE(top.code == 0);
  CHECK(rows_of(top.out).size() == 3);
  CHECK(rows_of(top.out)[0][0] == "Order");
  const auto rho = rows_of(dir.read("rho.csv"));
  CHECK(rho[1][1] == "1");

  const auto json = run({"rank-all", "--flows", flows, "--alpha", "1", "--format", "json"});
  REQUIRE(json.code == 0);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["columns"].size() == 9);
  CHECK(doc["rows"].size() == 4);
}

TEST_CASE("rank-all measure selection") {
  Scratch dir;
  const auto flows = dir.write("a.csv", kAbsorption);
  const auto emp = dir.write("emp.csv", "sector_id,value\n1,4\n2,2\n3,1\n4,3\n");
  const auto r = run({"rank-all", "--flows", flows, "--employment", emp, "--measures", "CBET,outmult,RWC"});
  REQUIRE(r.code == 0);
  CHECK(rows_of(r.out)[0] == std::vector<std::string>{"sector_id", "description",
                                                      "Counting Betweenness Centrality",
                                                      "Output Multiplier", "Random Walk Centrality"});
  const auto full = run({"rank-all", "--flows", flows, "--employment", emp, "--alpha", "1"});
  CHECK(rows_of(full.out)[1][5] == rows_of(r.out)[1][2]);

  const auto k3 = dir.write("k3.csv", kK3);
  CHECK(run({"rank-all", "--flows", k3, "--measures", "RWC,CLO"}).code == cli::kSuccess);
  CHECK(run({"rank-all", "--flows", flows, "--measures", "PAGERANK"}).code == cli::kUsageError);
  CHECK(run({"rank-all", "--flows", flows, "--measures", "EMPMULT"}).code == cli::kUsageError);
}

TEST_CASE("multipliers subcommand") {
  Scratch dir;
  const auto flows = dir.write("a.csv", "sector_id,1,2\n1,0,0\n2,0.5,0\n");
  const auto r = run({"multipliers", "--flows", flows});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "sector_id,description,OUTMULT,OUTMULT_rank\n"
        "1,Sector 1,1.5,1\n"
        "2,Sector 2,1,2\n");
}

TEST_CASE("aggregate subcommand") {
  Scratch dir;
  const auto flows = dir.write("f.csv", "sector_id,1,2,3\n1,1,2,3\n2,4,5,6\n3,7,8,9\n");
  const auto map = dir.write("map.csv", "fine_id,coarse_id,coarse_label\n1,1,Goods\n2,1,Goods\n3,2,Services\n");
  const auto r = run({"aggregate", "--flows", flows, "--agg-map", map});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "sector_id,label,1,2\n"
        "1,Goods,12,9\n"
        "2,Services,15,9\n");
  CHECK(run({"aggregate", "--flows", flows}).code == cli::kUsageError);
}

TEST_CASE("oracle subcommand") {
  Scratch dir;
  const auto flows = dir.write("k3.csv", kK3);
  const auto r = run({"oracle", "--flows", flows, "--source", "1", "--target", "3", "--node", "2",
                      "--walks", "2000", "--seed", "9"});
  REQUIRE(r.code == 0);
  const auto rows = rows_of(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"source", "target", "quantity", "analytic", "mc_mean",
                                            "mc_stderr", "z"});
  CHECK(rows[1][2] == "mfpt");
  CHECK(rows[1][3] == "2");
  CHECK(rows[2][2] == "visits:2");
  CHECK(run({"oracle", "--flows", flows, "--source", "1", "--target", "3", "--walks", "2000",
             "--seed", "9"})
            .out.substr(0, 80) == r.out.substr(0, 80));
}

TEST_CASE("exit codes") {
  Scratch dir;
  const auto k3 = dir.write("k3.csv", kK3);

  const auto missing = run({"rwc", "--flows", dir.path("nope.csv")});
  CHECK(missing.code == cli::kDataError);
  CHECK(missing.err.find("error:") != std::string::npos);

  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"pagerank", "--flows", k3}).code == cli::kUsageError);
  CHECK(run({"rwc"}).code == cli::kUsageError);
  CHECK(run({"closeness", "--flows", k3, "--alpha", "-1"}).code == cli::kUsageError);
  CHECK(run({"rwc", "--flows", k3, "--format", "xml"}).code == cli::kUsageError);
  CHECK(run({"oracle", "--flows", k3, "--source", "9", "--target", "1"}).code == cli::kUsageError);
  CHECK(run({"rwc", "--help"}).code == cli::kSuccess);

  const auto dangling = dir.write("d.csv", "sector_id,1,2\n1,0,0\n2,1,0\n");
  CHECK(run({"rwc", "--flows", dangling}).code == cli::kDataError);
  const auto negative = dir.write("n.csv", "sector_id,1,2\n1,0,-1\n2,1,0\n");
  CHECK(run({"cbet", "--flows", negative}).code == cli::kDataError);

  // Raw flows with row sums of two are not a productive coefficient matrix.
  CHECK(run({"multipliers", "--flows", k3}).code == cli::kNumericalError);
  const auto split = dir.write("s.csv", "sector_id,1,2,3,4\n1,0,1,0,0\n2,1,0,0,0\n3,0,0,0,1\n4,0,0,1,0\n");
  const auto strict = run({"rwc", "--flows", split});
  CHECK(strict.code == cli::kNumericalError);
  const auto lenient = run({"rwc", "--flows", split, "--allow-unreachable"});
  CHECK(lenient.code == cli::kSuccess);
  CHECK(lenient.out.find("UNDEF") != std::string::npos);
  CHECK(lenient.err.find("warning") != std::string::npos);
}

TEST_CASE("ingestion options") {
  Scratch dir;
  const auto flows = dir.write("f.csv", "sector_id,1,2,3\n1,0,1,0\n2,0,0,0\n3,1,0,0\n");
  CHECK(run({"rwc", "--flows", flows}).code == cli::kDataError);  // sector 2 buys nothing
  const auto t = run({"closeness", "--flows", flows, "--transpose", "--alpha", "0", "--allow-unreachable"});
  CHECK(t.code == cli::kSuccess);

  const auto iso = dir.write("iso.csv", "sector_id,1,2,3\n1,0,0,0.2\n2,0,0,0\n3,0.2,0,0\n");
  const auto dropped = run({"rwc", "--flows", iso, "--drop-isolated"});
  REQUIRE(dropped.code == 0);
  const auto rows = rows_of(dropped.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2][1] == "Sector 3");

  const auto rpc = dir.write("rpc.csv", "sector_id,value\n1,0.5\n2,1\n3,1\n");
  CHECK(run({"rwc", "--flows", iso, "--drop-isolated", "--rpc", rpc}).code == 0);
  const auto out = dir.write("x.csv", "1,10\n2,0\n3,4\n");
  CHECK(run({"multipliers", "--flows", iso, "--output-vector", out}).code == cli::kSuccess);
}
