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

// Seeded Monte Carlo random walks: an independent check on the analytic
// first-passage engine. Not used to produce report numbers.
//
// Reproducibility contract:
//  * Walks for one (source, target) pair are cut into chunks of
//    `WalkConfig::chunk` walks. Chunk c draws from std::mt19937_64 seeded with
//    splitmix64-mixed (seed, source, target, c), so the stream a walk sees
//    does not depend on how chunks are spread across workers.
//  * Uniforms are (x >> 11) * 2^-53, and the next state is the first index
//    whose cumulative row probability exceeds the uniform (inverse CDF in
//    ascending index order).
//  * Chunk statistics are merged in chunk order.

#pragma once

#include "ionet/errors.hpp"
#include "ionet/graph.hpp"
#include "ionet/parallel.hpp"
#include "ionet/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ionet {

struct WalkConfig {
  std::uint64_t seed = 0x5eed;
  std::size_t walks_per_pair = 100000;
  std::size_t max_steps = 10000000;
  std::size_t chunk = 4096;
  unsigned workers = 0;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Per-walk first-passage step count and visit counts for every node.
struct WalkSummary {
  Estimate steps;
  std::vector<Estimate> visits;  // indexed by node
};

namespace oracle_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t source, std::uint64_t target,
                                 std::uint64_t chunk) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ source);
  h = splitmix64(h ^ (target + 0x100000000ull));
  return splitmix64(h ^ (chunk + 0x200000000ull));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Running mean / sum of squared deviations (Welford), mergeable.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
  Estimate estimate() const {
    Estimate e;
    e.samples = static_cast<std::size_t>(count);
    e.mean = mean;
    e.std_error = count > 1.0 ? std::sqrt(m2 / (count - 1.0)) / std::sqrt(count) : 0.0;
    return e;
  }
};

struct ChunkResult {
  Moments steps;
  std::vector<Moments> visits;
  std::size_t truncated = 0;
};

class Sampler {
 public:
  template <typename Scalar>
  explicit Sampler(const TransitionMatrix<Scalar>& m) : n_(m.size()) {
    cumulative_.resize(static_cast<std::size_t>(n_ * n_));
    last_positive_.resize(static_cast<std::size_t>(n_), 0);
    for (Index i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < n_; ++j) {
        const double p = static_cast<double>(m(i, j));
        acc += p;
        cumulative_[static_cast<std::size_t>(i * n_ + j)] = acc;
        if (p > 0.0) last_positive_[static_cast<std::size_t>(i)] = j;
      }
    }
  }

  Index next(Index from, double u) const {
    const auto row = cumulative_.begin() + from * n_;
    const auto it = std::upper_bound(row, row + n_, u);
    if (it == row + n_) return last_positive_[static_cast<std::size_t>(from)];
    return static_cast<Index>(it - row);
  }

  Index size() const { return n_; }

 private:
  Index n_;
  std::vector<double> cumulative_;  // row-major
  std::vector<Index> last_positive_;
};

inline ChunkResult run_chunk(const Sampler& sampler, Index source, Index target,
                             std::size_t walks, const WalkConfig& cfg, std::size_t chunk_index) {
  const Index n = sampler.size();
  ChunkResult out;
  out.visits.resize(static_cast<std::size_t>(n));
  std::mt19937_64 rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(source),
                                  static_cast<std::uint64_t>(target), chunk_index));
  std::vector<double> counts(static_cast<std::size_t>(n));
  for (std::size_t w = 0; w < walks; ++w) {
    std::fill(counts.begin(), counts.end(), 0.0);
    Index at = source;
    std::size_t steps = 0;
    bool absorbed = false;
    while (steps < cfg.max_steps) {
      counts[static_cast<std::size_t>(at)] += 1.0;
      at = sampler.next(at, uniform01(rng));
      ++steps;
      if (at == target) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) {
      ++out.truncated;
      continue;
    }
    counts[static_cast<std::size_t>(target)] = 1.0;
    out.steps.add(static_cast<double>(steps));
    for (Index i = 0; i < n; ++i) out.visits[static_cast<std::size_t>(i)].add(counts[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace oracle_detail

/// Simulates `cfg.walks_per_pair` walks from source until first arrival at
/// target. Throws CapExceeded if any walk runs past `cfg.max_steps`.
template <typename Scalar>
WalkSummary simulate_walks(const TransitionMatrix<Scalar>& m, Index source, Index target,
                           const WalkConfig& cfg) {
  const Index n = m.size();
  if (source < 0 || source >= n || target < 0 || target >= n)
    throw OutOfRange("walk endpoints outside 1.." + std::to_string(n));
  if (source == target) throw OutOfRange("source and target must differ");
  if (cfg.walks_per_pair < 1) throw DomainError("walks_per_pair must be at least 1");
  const std::size_t chunk = std::max<std::size_t>(cfg.chunk, 1);

  const oracle_detail::Sampler sampler(m);
  const std::size_t chunks = (cfg.walks_per_pair + chunk - 1) / chunk;
  std::vector<oracle_detail::ChunkResult> results(chunks);
  detail::parallel_for(chunks, cfg.workers, [&](std::size_t c) {
    const std::size_t walks = std::min(chunk, cfg.walks_per_pair - c * chunk);
    results[c] = oracle_detail::run_chunk(sampler, source, target, walks, cfg, c);
  });

  std::size_t truncated = 0;
  oracle_detail::Moments steps;
  std::vector<oracle_detail::Moments> visits(static_cast<std::size_t>(n));
  for (const auto& r : results) {
    truncated += r.truncated;
    steps.merge(r.steps);
    for (std::size_t i = 0; i < visits.size(); ++i) visits[i].merge(r.visits[i]);
  }
  if (truncated > 0) throw CapExceeded(truncated, cfg.walks_per_pair);

  WalkSummary out;
  out.steps = steps.estimate();
  for (const auto& v : visits) out.visits.push_back(v.estimate());
  return out;
}

template <typename Scalar>
Estimate simulate_mfpt(const TransitionMatrix<Scalar>& m, Index source, Index target,
                       const WalkConfig& cfg) {
  return simulate_walks(m, source, target, cfg).steps;
}

/// Visits to `node`, counting the start and counting arrival at the target
/// once.
template <typename Scalar>
Estimate simulate_visits(const TransitionMatrix<Scalar>& m, Index source, Index target, Index node,
                         const WalkConfig& cfg) {
  if (node < 0 || node >= m.size()) throw OutOfRange("node outside 1.." + std::to_string(m.size()));
  return simulate_walks(m, source, target, cfg).visits[static_cast<std::size_t>(node)];
}

}  // namespace ionet
