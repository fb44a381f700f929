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

#include "ionet/oracle.hpp"
#include "ionet/random_walk.hpp"
#include "support/oracles.hpp"

#include <random>

using namespace ionet;
using Catch::Matchers::WithinRel;
using Eigen::MatrixXd;

namespace {

TransitionMatrix<double> stochastic(std::initializer_list<double> values, Index n) {
  MatrixXd m(n, n);
  auto it = values.begin();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = *it++;
  return TransitionMatrix<double>::from_stochastic(m);
}

WalkConfig config(std::size_t walks, std::uint64_t seed = 2024) {
  WalkConfig cfg;
  cfg.walks_per_pair = walks;
  cfg.seed = seed;
  return cfg;
}

bool within(double analytic, const Estimate& e, double k = 3.0) {
  return std::abs(e.mean - analytic) <= k * e.std_error;
}

}  // namespace

TEST_CASE("generator test vector") {
  // The standard fixes the 10000th output of a default-constructed engine.
  std::mt19937_64 rng;
  rng.discard(9999);
  CHECK(rng() == 9981545732273789042ull);
  CHECK(oracle_detail::splitmix64(0) == 0xE220A8397B1DCDAFull);
}

TEST_CASE("simulate_mfpt examples") {
  SECTION("deterministic walk") {
    const auto e = simulate_mfpt(stochastic({0, 1, 1, 0}, 2), 0, 1, config(1000));
    CHECK(e.mean == 1.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.samples == 1000);
  }
  SECTION("geometric expectation") {
    const auto e = simulate_mfpt(stochastic({0.5, 0.5, 0.5, 0.5}, 2), 0, 1, config(100000));
    CHECK(within(2.0, e));
    CHECK(e.std_error > 0.0);
  }
  SECTION("disconnected pair hits the cap") {
    MatrixXd a = MatrixXd::Zero(4, 4);
    a(0, 1) = a(1, 0) = a(2, 3) = a(3, 2) = 1.0;
    WalkConfig cfg = config(50);
    cfg.max_steps = 1000;
    try {
      simulate_mfpt(build_transition<double>(a), 0, 2, cfg);
      FAIL("expected CapExceeded");
    } catch (const CapExceeded& e) {
      CHECK(e.truncated() == 50);
      CHECK(e.truncated_fraction() == 1.0);
    }
  }
  SECTION("bad endpoints") {
    CHECK_THROWS_AS(simulate_mfpt(stochastic({0, 1, 1, 0}, 2), 0, 0, config(10)), OutOfRange);
    CHECK_THROWS_AS(simulate_mfpt(stochastic({0, 1, 1, 0}, 2), 0, 2, config(10)), OutOfRange);
  }
}

TEST_CASE("simulate_visits examples") {
  SECTION("two-cycle") {
    const auto e = simulate_visits(stochastic({0, 1, 1, 0}, 2), 0, 1, 0, config(1000));
    CHECK(e.mean == 1.0);
    CHECK(e.std_error == 0.0);
  }
  SECTION("uniform K3") {
    const auto m = build_transition<double>(testing::complete_graph(3));
    const auto e = simulate_visits(m, 0, 2, 1, config(100000));
    CHECK(within(2.0 / 3.0, e));
    const auto target = simulate_visits(m, 0, 2, 2, config(1000));
    CHECK(target.mean == 1.0);
  }
  SECTION("self-loop dwell") {
    const auto e = simulate_visits(stochastic({0.5, 0.5, 1, 0}, 2), 0, 1, 0, config(100000));
    CHECK(within(2.0, e));
  }
}

TEST_CASE("simulation agrees with the analytic engine on a dense chain") {
  std::mt19937_64 rng(99);
  const auto m = build_transition<double>(testing::random_dense(5, rng));
  const auto h = mfpt_matrix(m);
  const auto v = visit_counts(m, 3);
  int misses = 0;
  for (Index j : {0, 1, 2, 4}) {
    const auto sim = simulate_walks(m, j, 3, config(50000, 7 + j));
    if (!within(h(j, 3), sim.steps)) ++misses;
    for (Index i = 0; i < 5; ++i)
      if (!within(v(j, i), sim.visits[i])) ++misses;
  }
  // 24 comparisons at 3 standard errors; at most one miss is sampling noise.
  CHECK(misses <= 1);
}

TEST_CASE("fixed seed reproduces bit-identical estimates") {
  const auto m = build_transition<double>(testing::complete_graph(4));
  WalkConfig a = config(20000, 42);
  WalkConfig b = a;
  a.workers = 1;
  b.workers = 3;
  b.chunk = a.chunk;
  const auto x = simulate_walks(m, 0, 3, a);
  const auto y = simulate_walks(m, 0, 3, b);
  const auto z = simulate_walks(m, 0, 3, a);
  CHECK(x.steps.mean == y.steps.mean);
  CHECK(x.steps.std_error == y.steps.std_error);
  CHECK(x.steps.mean == z.steps.mean);
  for (std::size_t i = 0; i < 4; ++i) CHECK(x.visits[i].mean == y.visits[i].mean);

  WalkConfig other = a;
  other.seed = 43;
  CHECK(simulate_walks(m, 0, 3, other).steps.mean != x.steps.mean);
}

TEST_CASE("frozen output for a fixed configuration") {
  // Pins the sampling contract (seeding, uniform conversion, inverse CDF).
  const auto m = build_transition<double>(testing::complete_graph(3));
  WalkConfig cfg = config(1000, 12345);
  cfg.chunk = 256;
  const auto e = simulate_mfpt(m, 0, 2, cfg);
  CHECK(e.samples == 1000);
  CHECK(e.mean == 0x1.f5c28f5c28f5bp+0);  // 1960 steps over 1000 walks, Welford rounding
}

TEST_CASE("standard error shrinks like one over root N") {
  const auto m = build_transition<double>(testing::complete_graph(4));
  const auto base = simulate_mfpt(m, 0, 1, config(25000, 3));
  const auto doubled = simulate_mfpt(m, 0, 1, config(50000, 4));
  const auto quadrupled = simulate_mfpt(m, 0, 1, config(100000, 5));
  CHECK_THAT(base.std_error / doubled.std_error, WithinRel(std::sqrt(2.0), 0.05));
  CHECK_THAT(base.std_error / quadrupled.std_error, WithinRel(2.0, 0.05));
}
