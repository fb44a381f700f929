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

// Path-based centralities on the support graph of a flow matrix, with edge
// cost 1 / w^alpha. alpha = 0 gives hop counts (binary Freeman measures);
// larger alpha lets tie strength dominate the number of steps.
// Self-loops never lie on a shortest path and are ignored.

#pragma once

#include "ionet/errors.hpp"
#include "ionet/graph.hpp"
#include "ionet/parallel.hpp"
#include "ionet/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ionet {

/// Relative tolerance under which two path costs count as a tie.
inline constexpr double kGeodesicTieTolerance = 1e-12;

template <typename Scalar>
struct DistanceMatrix {
  MatrixX<Scalar> dist;  // +inf where unreachable
  Scalar alpha{};

  Index size() const { return dist.rows(); }
  Scalar operator()(Index from, Index to) const { return dist(from, to); }
};

/// Shortest-path distances together with geodesic counts.
/// Counts are held as doubles; they are exact up to 2^53.
template <typename Scalar>
struct GeodesicCounts {
  DistanceMatrix<Scalar> distance;
  MatrixX<double> paths;  // paths(j,k): number of geodesics j -> k, paths(j,j) = 1

  Index size() const { return paths.rows(); }
  double count(Index from, Index to) const { return paths(from, to); }

  /// True when `via` lies on some geodesic from -> to (endpoints excluded).
  bool on_geodesic(Index from, Index to, Index via) const {
    if (via == from || via == to || from == to) return false;
    const Scalar dfv = distance(from, via), dvt = distance(via, to), dft = distance(from, to);
    if (std::isinf(static_cast<double>(dft)) || std::isinf(static_cast<double>(dfv)) ||
        std::isinf(static_cast<double>(dvt)))
      return false;
    return ties(dfv + dvt, dft);
  }

  /// Number of geodesics from -> to passing through `via`.
  double through(Index from, Index to, Index via) const {
    return on_geodesic(from, to, via) ? paths(from, via) * paths(via, to) : 0.0;
  }

  static bool ties(Scalar a, Scalar b) {
    using std::abs;
    return abs(a - b) <= Scalar(kGeodesicTieTolerance) * std::max(abs(a), abs(b));
  }
};

/// Cost of traversing an edge of weight w > 0.
template <typename Scalar>
Scalar edge_cost(Scalar weight, Scalar alpha) {
  using std::pow;
  if (alpha == Scalar(0)) return Scalar(1);
  return Scalar(1) / pow(weight, alpha);
}

namespace detail {

/// Dense-array Dijkstra from one source; fills dist and geodesic counts.
template <typename Scalar>
void single_source_geodesics(const MatrixX<Scalar>& w, Scalar alpha, Index source,
                             Eigen::Ref<VectorX<Scalar>> dist, Eigen::Ref<Eigen::VectorXd> sigma) {
  const Index n = w.rows();
  dist.setConstant(infinity<Scalar>());
  sigma.setZero();
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  dist[source] = Scalar(0);

  for (Index step = 0; step < n; ++step) {
    Index u = -1;
    for (Index v = 0; v < n; ++v)
      if (!done[static_cast<std::size_t>(v)] && !std::isinf(static_cast<double>(dist[v])) &&
          (u < 0 || dist[v] < dist[u]))
        u = v;
    if (u < 0) break;
    done[static_cast<std::size_t>(u)] = true;
    for (Index v = 0; v < n; ++v) {
      if (v == u || !(w(u, v) > Scalar(0))) continue;
      const Scalar candidate = dist[u] + edge_cost(w(u, v), alpha);
      if (candidate < dist[v]) dist[v] = candidate;
    }
  }

  // Counts in order of final distance, so every predecessor is settled first.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return dist[a] < dist[b]; });
  sigma[source] = 1.0;
  for (Index v : order) {
    if (v == source || std::isinf(static_cast<double>(dist[v]))) continue;
    double total = 0.0;
    for (Index u = 0; u < n; ++u) {
      if (u == v || !(w(u, v) > Scalar(0)) || std::isinf(static_cast<double>(dist[u]))) continue;
      if (GeodesicCounts<Scalar>::ties(dist[u] + edge_cost(w(u, v), alpha), dist[v]))
        total += sigma[u];
    }
    sigma[v] = total;
  }
}

}  // namespace detail

/// All-pairs distances and geodesic counts, one source per (parallel) task.
template <typename Scalar>
GeodesicCounts<Scalar> geodesic_counts(const FlowMatrix<Scalar>& flows, Scalar alpha,
                                       unsigned workers = 0) {
  if (!(alpha >= Scalar(0)) || std::isinf(static_cast<double>(alpha)))
    throw DomainError("alpha must be a finite value >= 0");
  const Index n = flows.size();
  GeodesicCounts<Scalar> g;
  g.distance.alpha = alpha;
  g.distance.dist.resize(n, n);
  g.paths.resize(n, n);
  std::vector<VectorX<Scalar>> rows(static_cast<std::size_t>(n));
  std::vector<Eigen::VectorXd> counts(static_cast<std::size_t>(n));
  detail::parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t s) {
    rows[s].resize(n);
    counts[s].resize(n);
    detail::single_source_geodesics<Scalar>(flows.values(), alpha, static_cast<Index>(s),
                                            rows[s], counts[s]);
  });
  for (Index s = 0; s < n; ++s) {
    g.distance.dist.row(s) = rows[static_cast<std::size_t>(s)].transpose();
    g.paths.row(s) = counts[static_cast<std::size_t>(s)].transpose();
  }
  return g;
}

template <typename Scalar>
DistanceMatrix<Scalar> weighted_distance(const FlowMatrix<Scalar>& flows, Scalar alpha,
                                         unsigned workers = 0) {
  return geodesic_counts(flows, alpha, workers).distance;
}

/// Inverse of the summed distances from i to all other sectors. Tagged CLO
/// for alpha = 0 and WCLO otherwise. Unreachable sectors make the score
/// undefined: an error unless `allow_undefined`, which sums reachable
/// distances only and flags the score.
template <typename Scalar>
CentralityVector<Scalar> closeness(const DistanceMatrix<Scalar>& d, bool allow_undefined = false) {
  const Index n = d.size();
  MeasureMeta meta;
  meta.alpha = static_cast<double>(d.alpha);
  CentralityVector<Scalar> c(d.alpha == Scalar(0) ? Measure::Closeness : Measure::WeightedCloseness,
                             VectorX<Scalar>::Zero(n), meta);
  for (Index i = 0; i < n; ++i) {
    Scalar total(0);
    bool undefined = false;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (std::isinf(static_cast<double>(d(i, j)))) {
        undefined = true;
        continue;
      }
      total += d(i, j);
    }
    if (undefined && !allow_undefined)
      throw UndefinedScore(static_cast<std::size_t>(i), "closeness");
    c.scores[i] = total > Scalar(0) ? Scalar(1) / total : Scalar(0);
    c.undefined[static_cast<std::size_t>(i)] = undefined || !(total > Scalar(0));
  }
  return c;
}

/// Sum over ordered pairs (j,k), j != i != k, of the share of j -> k
/// geodesics passing through i. Pairs are accumulated j-major, k-minor.
/// `normalize` divides by (n-1)(n-2).
template <typename Scalar>
CentralityVector<Scalar> betweenness(const GeodesicCounts<Scalar>& g, bool normalize = false) {
  const Index n = g.size();
  VectorX<Scalar> scores = VectorX<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double total = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j || g.count(j, k) < 1.0) continue;
        total += g.through(j, k, i) / g.count(j, k);
      }
    }
    scores[i] = static_cast<Scalar>(total);
  }
  if (normalize && n > 2) scores /= Scalar(n - 1) * Scalar(n - 2);
  MeasureMeta meta;
  meta.alpha = static_cast<double>(g.distance.alpha);
  meta.normalized = normalize;
  return CentralityVector<Scalar>(
      g.distance.alpha == Scalar(0) ? Measure::Betweenness : Measure::WeightedBetweenness,
      std::move(scores), meta);
}

template <typename Scalar>
CentralityVector<Scalar> betweenness(const FlowMatrix<Scalar>& flows, Scalar alpha,
                                     bool normalize = false, unsigned workers = 0) {
  return betweenness(geodesic_counts(flows, alpha, workers), normalize);
}

}  // namespace ionet
