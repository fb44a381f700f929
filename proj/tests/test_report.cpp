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

#include "ionet/errors.hpp"
#include "ionet/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

using namespace ionet;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<int> rank_of(std::vector<double> v, bool descending = true) {
  return rank(std::span<const double>(v), descending);
}

CentralityVector<double> scores(Measure m, std::vector<double> v) {
  CentralityVector<double> c;
  c.measure = m;
  c.scores = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
  c.undefined.assign(v.size(), false);
  return c;
}

}  // namespace

TEST_CASE("competition ranking") {
  CHECK(rank_of({5, 3, 3, 1}) == std::vector<int>{1, 2, 2, 4});
  CHECK(rank_of({1, 2, 3}) == std::vector<int>{3, 2, 1});
  CHECK(rank_of({1, 2, 3}, false) == std::vector<int>{1, 2, 3});
  CHECK(rank_of({4, 4, 4, 4}) == std::vector<int>{1, 1, 1, 1});
  CHECK(rank_of({}).empty());
  CHECK(rank_of({2, 7, 7, 7, 1}) == std::vector<int>{4, 1, 1, 1, 5});
}

TEST_CASE("undefined scores rank last by id") {
  const std::vector<double> v{0.1, 9.0, 0.5, 3.0};
  const auto r = rank(std::span<const double>(v), true, {false, true, false, true});
  CHECK(r == std::vector<int>{2, 3, 1, 4});
}

TEST_CASE("near-equal scores tie, distinct scores do not") {
  CHECK(rank_of({1.0, 1.0 + 1e-15, 0.5}) == std::vector<int>{1, 1, 3});
  CHECK(rank_of({1.0, 1.0 + 1e-9}) == std::vector<int>{2, 1});
  CHECK(scores_tie(0.0, 0.0));
  CHECK_FALSE(scores_tie(0.0, 1e-300));
}

TEST_CASE("rank is invariant under strictly monotone transforms") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(30);
    for (auto& x : v) x = pick(rng) == 0 ? 2.5 : u(rng);  // plant ties
    std::vector<double> logged(v.size()), cubed(v.size()), flipped(v.size());
    std::transform(v.begin(), v.end(), logged.begin(), [](double x) { return std::log(x); });
    std::transform(v.begin(), v.end(), cubed.begin(), [](double x) { return x * x * x + 4.0; });
    std::transform(v.begin(), v.end(), flipped.begin(), [](double x) { return -x; });
    const auto r = rank_of(v);
    CHECK(rank_of(logged) == r);
    CHECK(rank_of(cubed) == r);
    CHECK(rank_of(flipped, false) == r);
  }
}

TEST_CASE("every sector gets exactly one position") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(20);
    for (auto& x : v) x = level(rng);
    const auto r = rank_of(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto better = std::count_if(v.begin(), v.end(), [&](double x) { return x > v[i]; });
      CHECK(r[i] == better + 1);
    }
  }
}

TEST_CASE("spearman correlation") {
  const std::vector<int> a{1, 2, 3, 4};
  const std::vector<int> swapped{1, 2, 4, 3};
  const std::vector<int> reversed{4, 3, 2, 1};
  CHECK_THAT(spearman(a, a), WithinAbs(1.0, 1e-15));
  CHECK_THAT(spearman(a, reversed), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(spearman(a, swapped), WithinAbs(0.8, 1e-15));

  // Average-rank correction: the tie at 2 becomes 2.5, 2.5. Deviations from
  // the mean 2.5 are (-1.5, -0.5, 0.5, 1.5) and (-1.5, 0, 0, 1.5).
  const std::vector<int> tied{1, 2, 2, 4};
  const double expected = 4.5 / std::sqrt(5.0 * 4.5);
  CHECK_THAT(spearman(a, tied), WithinAbs(expected, 1e-15));

  CHECK(std::isnan(spearman(a, std::vector<int>{1, 1, 1, 1})));
  CHECK_THROWS_AS(spearman(a, std::vector<int>{1, 2, 3}), DimensionMismatch);
  CHECK_THROWS_AS(spearman(std::vector<int>{1}, std::vector<int>{1}), DimensionMismatch);
}

TEST_CASE("rank tables and top_n") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(86), b(86);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  const auto sectors = default_sectors(86);
  const auto table = make_rank_table(sectors, {scores(Measure::RandomWalkCentrality, a),
                                               scores(Measure::CountingBetweenness, b)});
  REQUIRE(table.rows.size() == 86);
  CHECK(table.columns[0].header == "Random Walk Centrality");
  CHECK(table.column_index("CBET") == 1);
  CHECK(table.column_index("Counting Betweenness Centrality") == 1);
  CHECK_THROWS_AS(table.column_index("PageRank"), UnknownMeasure);
  CHECK_THROWS_AS(top_n(table, "PageRank", 3), UnknownMeasure);

  const auto ten = top_n(table, "RWC", 10);
  CHECK(ten.rows.size() == 10);
  for (std::size_t r = 1; r < ten.rows.size(); ++r) CHECK(ten.rows[r - 1].ranks[0] <= ten.rows[r].ranks[0]);
  CHECK(ten.rows[0].ranks[0] == 1);

  const auto best = top_n(table, "RWC", 1);
  REQUIRE(best.rows.size() == 1);
  CHECK(best.rows[0].id == std::max_element(a.begin(), a.end()) - a.begin());

  CHECK(top_n(table, "RWC", 86).rows.size() == 86);
  CHECK(top_n(table, "RWC", 500).rows.size() == 86);
}

TEST_CASE("top_n keeps tied rows stable by id") {
  const auto table = make_rank_table(default_sectors(5), {scores(Measure::Closeness, {1, 3, 3, 3, 0})});
  const auto top = top_n(table, "CLO", 2);
  REQUIRE(top.rows.size() == 2);
  CHECK(top.rows[0].id == 1);
  CHECK(top.rows[1].id == 2);
}

TEST_CASE("writers") {
  auto c = scores(Measure::RandomWalkCentrality, {0.75, 0.5, 0.75});
  c.undefined[1] = true;
  SectorList sectors = default_sectors(3);
  sectors[2].label = "Food, drink";

  std::ostringstream csv_out;
  write_scores(csv_out, sectors, c, OutputFormat::Csv);
  CHECK(csv_out.str() ==
        "sector_id,description,RWC,rank\n"
        "1,Sector 1,0.75,1\n"
        "2,Sector 2,UNDEF,3 UNDEF\n"
        "3,\"Food, drink\",0.75,1\n");

  std::ostringstream json_out;
  write_scores(json_out, sectors, c, OutputFormat::Json);
  const auto doc = nlohmann::json::parse(json_out.str());
  CHECK(doc["measure"] == "RWC");
  CHECK(doc["columns"] == nlohmann::json({"sector_id", "description", "RWC", "rank"}));
  const auto& rows = doc["rows"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["sector_id"] == 1);
  CHECK(rows[0]["RWC"] == 0.75);
  CHECK(rows[1]["RWC"] == "UNDEF");

  const auto table = make_rank_table(sectors, {c, scores(Measure::OutputMultiplier, {1.2, 1.9, 1.2})});
  std::ostringstream ranks;
  write_rank_table(ranks, table, OutputFormat::Csv);
  CHECK(ranks.str() ==
        "sector_id,description,Random Walk Centrality,Output Multiplier\n"
        "1,Sector 1,1,2\n"
        "2,Sector 2,3 UNDEF,1\n"
        "3,\"Food, drink\",1,2\n");

  std::ostringstream top;
  write_top_table(top, table, 2, OutputFormat::Csv);
  CHECK(top.str() ==
        "Order,Random Walk Centrality,Output Multiplier\n"
        "1,Sector 1,Sector 2\n"
        "2,\"Food, drink\",Sector 1\n");
}
