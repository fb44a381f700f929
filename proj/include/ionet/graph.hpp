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

// Network representation: valued directed flow matrices, the row-stochastic
// transition matrix of the walk on them, target deflation, aggregation and
// support-graph reachability.
//
// Orientation: row i holds the purchases made by sector i, so a walker at i
// steps to j with probability proportional to a_ij.

#pragma once

#include "ionet/errors.hpp"
#include "ionet/types.hpp"

#include <cmath>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace ionet {

/// Square, nonnegative, finite flow or absorption-coefficient matrix with its
/// sector labels. Self-loops (positive diagonal) are allowed.
template <typename Scalar>
class FlowMatrix {
 public:
  FlowMatrix() = default;

  explicit FlowMatrix(MatrixX<Scalar> values)
      : FlowMatrix(values, default_sectors(static_cast<std::size_t>(values.rows()))) {}

  FlowMatrix(MatrixX<Scalar> values, SectorList sectors)
      : values_(std::move(values)), sectors_(std::move(sectors)) {
    if (values_.rows() != values_.cols())
      throw DimensionMismatch("flow matrix is " + std::to_string(values_.rows()) +
                              "x" + std::to_string(values_.cols()));
    if (static_cast<Index>(sectors_.size()) != values_.rows())
      throw DimensionMismatch(std::to_string(sectors_.size()) + " labels for " +
                              std::to_string(values_.rows()) + " sectors");
    if (!values_.allFinite()) throw NonFinite("flow matrix");
    for (Index i = 0; i < values_.rows(); ++i)
      for (Index j = 0; j < values_.cols(); ++j)
        if (values_(i, j) < Scalar(0))
          throw DomainError("negative flow at (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ")");
    for (const auto& s : sectors_)
      if (s.label.empty()) throw DomainError("empty sector label");
  }

  Index size() const { return values_.rows(); }
  const MatrixX<Scalar>& values() const { return values_; }
  const SectorList& sectors() const { return sectors_; }

 private:
  MatrixX<Scalar> values_;
  SectorList sectors_;
};

/// Row-stochastic matrix of walk probabilities.
template <typename Scalar>
class TransitionMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  TransitionMatrix() = default;

  /// Validates an explicitly given stochastic matrix.
  static TransitionMatrix from_stochastic(MatrixX<Scalar> m) {
    if (m.rows() != m.cols())
      throw DimensionMismatch("transition matrix must be square");
    if (!m.allFinite()) throw NonFinite("transition matrix");
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j)
        if (m(i, j) < Scalar(0) || m(i, j) > Scalar(1))
          throw DomainError("transition probability outside [0,1] at row " +
                            std::to_string(i + 1));
      using std::abs;
      if (abs(m.row(i).sum() - Scalar(1)) > Scalar(kRowSumTolerance))
        throw DomainError("transition row " + std::to_string(i + 1) +
                          " does not sum to 1");
    }
    TransitionMatrix t;
    t.m_ = std::move(m);
    return t;
  }

  Index size() const { return m_.rows(); }
  const MatrixX<Scalar>& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

 private:
  template <typename S>
  friend TransitionMatrix<S> build_transition(const FlowMatrix<S>&);
  template <typename S>
  friend TransitionMatrix<S> build_transition(const MatrixX<S>&);

  MatrixX<Scalar> m_;
};

/// Normalizes every row of the flows to sum to one.
template <typename Scalar>
TransitionMatrix<Scalar> build_transition(const MatrixX<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("flow matrix must be square");
  if (!a.allFinite()) throw NonFinite("flow matrix");
  TransitionMatrix<Scalar> t;
  t.m_.resize(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    const Scalar total = a.row(i).sum();
    if (!(total > Scalar(0))) throw DanglingSector(static_cast<std::size_t>(i));
    t.m_.row(i) = a.row(i) / total;
  }
  return t;
}

template <typename Scalar>
TransitionMatrix<Scalar> build_transition(const FlowMatrix<Scalar>& flows) {
  return build_transition<Scalar>(flows.values());
}

/// A transition matrix with one sector's row and column removed. Entries are
/// copied, never recomputed.
template <typename Scalar>
struct DeflatedTransition {
  Index removed = 0;
  /// surviving[r] is the original id of row/column r of `matrix`.
  std::vector<Index> surviving;
  MatrixX<Scalar> matrix;
};

template <typename Scalar>
DeflatedTransition<Scalar> deflate(const TransitionMatrix<Scalar>& m, Index target) {
  const Index n = m.size();
  if (n < 2) throw OutOfRange("deflation needs at least two sectors");
  if (target < 0 || target >= n)
    throw OutOfRange("target " + std::to_string(target + 1) + " outside 1.." +
                     std::to_string(n));
  DeflatedTransition<Scalar> d;
  d.removed = target;
  d.surviving.reserve(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i)
    if (i != target) d.surviving.push_back(i);
  d.matrix.resize(n - 1, n - 1);
  for (Index r = 0; r < n - 1; ++r)
    for (Index c = 0; c < n - 1; ++c)
      d.matrix(r, c) = m(d.surviving[r], d.surviving[c]);
  return d;
}

/// Fine-to-coarse sector assignment. coarse_of[i] < 0 marks an unmapped fine
/// sector (reported when the map is applied).
struct AggregationMap {
  std::vector<Index> coarse_of;
  SectorList coarse_sectors;

  Index fine_size() const { return static_cast<Index>(coarse_of.size()); }
  Index coarse_size() const { return static_cast<Index>(coarse_sectors.size()); }
};

/// Sums flows block-wise: coarse (I,J) = sum of fine (i,j) with i in I, j in J.
/// Meant for monetary flows; coefficients should be re-derived afterwards.
template <typename Scalar>
FlowMatrix<Scalar> aggregate(const FlowMatrix<Scalar>& flows, const AggregationMap& map) {
  const Index n = flows.size();
  const Index m = map.coarse_size();
  for (Index i = 0; i < n; ++i) {
    if (i >= map.fine_size() || map.coarse_of[static_cast<std::size_t>(i)] < 0)
      throw UnmappedSector(static_cast<std::size_t>(i));
    if (map.coarse_of[static_cast<std::size_t>(i)] >= m)
      throw OutOfRange("coarse id " +
                       std::to_string(map.coarse_of[static_cast<std::size_t>(i)] + 1) +
                       " has no label");
  }
  if (map.fine_size() > n)
    throw DimensionMismatch("aggregation map covers " +
                            std::to_string(map.fine_size()) + " sectors, flows have " +
                            std::to_string(n));
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (Index i = 0; i < n; ++i) used[static_cast<std::size_t>(map.coarse_of[static_cast<std::size_t>(i)])] = true;
  for (Index c = 0; c < m; ++c)
    if (!used[static_cast<std::size_t>(c)])
      throw DomainError("coarse sector " + std::to_string(c + 1) +
                        " receives no fine sectors");

  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(m, m);
  for (Index i = 0; i < n; ++i) {
    const Index ci = map.coarse_of[static_cast<std::size_t>(i)];
    for (Index j = 0; j < n; ++j)
      out(ci, map.coarse_of[static_cast<std::size_t>(j)]) += flows.values()(i, j);
  }
  return FlowMatrix<Scalar>(std::move(out), map.coarse_sectors);
}

template <typename Scalar>
FlowMatrix<Scalar> transposed(const FlowMatrix<Scalar>& flows) {
  return FlowMatrix<Scalar>(flows.values().transpose(), flows.sectors());
}

/// Removes sectors whose row and column are both entirely zero.
/// Returns the reduced matrix and the original ids that were kept.
template <typename Scalar>
std::pair<FlowMatrix<Scalar>, std::vector<Index>> drop_isolated(const FlowMatrix<Scalar>& flows) {
  const auto& a = flows.values();
  std::vector<Index> kept;
  for (Index i = 0; i < a.rows(); ++i)
    if (!(a.row(i).isZero(0) && a.col(i).isZero(0))) kept.push_back(i);
  const Index k = static_cast<Index>(kept.size());
  MatrixX<Scalar> out(k, k);
  SectorList sectors;
  for (Index r = 0; r < k; ++r) {
    sectors.push_back(flows.sectors()[static_cast<std::size_t>(kept[r])]);
    for (Index c = 0; c < k; ++c) out(r, c) = a(kept[r], kept[c]);
  }
  return {FlowMatrix<Scalar>(std::move(out), std::move(sectors)), std::move(kept)};
}

// --- reachability ------------------------------------------------------------

struct ReachabilityReport {
  /// unreachable_from[j] lists the sources that have no positive-probability
  /// path to target j.
  std::vector<std::vector<Index>> unreachable_from;

  bool reachable_from_all(Index target) const {
    return unreachable_from[static_cast<std::size_t>(target)].empty();
  }
  bool all_reachable() const {
    for (const auto& u : unreachable_from)
      if (!u.empty()) return false;
    return true;
  }
};

namespace detail {

/// Nodes that can reach any node in `seeds` along support edges, never
/// passing through `blocked` (pass -1 for none). Seeds are included.
template <typename Scalar>
std::vector<bool> reverse_reach(const MatrixX<Scalar>& m, const std::vector<Index>& seeds,
                                Index blocked) {
  const Index n = m.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<Index> queue;
  for (Index s : seeds) {
    seen[static_cast<std::size_t>(s)] = true;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (Index u = 0; u < n; ++u) {
      if (seen[static_cast<std::size_t>(u)] || u == blocked) continue;
      if (m(u, v) > Scalar(0)) {
        seen[static_cast<std::size_t>(u)] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace detail

template <typename Scalar>
ReachabilityReport check_reachability(const TransitionMatrix<Scalar>& m) {
  const Index n = m.size();
  ReachabilityReport report;
  report.unreachable_from.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const auto reach = detail::reverse_reach(m.matrix(), {j}, Index{-1});
    for (Index i = 0; i < n; ++i)
      if (!reach[static_cast<std::size_t>(i)])
        report.unreachable_from[static_cast<std::size_t>(j)].push_back(i);
  }
  return report;
}

/// For each source, whether a walk started there hits `target` with
/// probability one. That holds exactly when the source cannot reach, while
/// avoiding the target, any node from which the target is unreachable.
/// The target's own entry is true.
template <typename Scalar>
std::vector<bool> surely_absorbed(const TransitionMatrix<Scalar>& m, Index target) {
  const Index n = m.size();
  const auto can_hit = detail::reverse_reach(m.matrix(), {target}, Index{-1});
  std::vector<Index> trapped;
  for (Index i = 0; i < n; ++i)
    if (!can_hit[static_cast<std::size_t>(i)]) trapped.push_back(i);
  std::vector<bool> sure(static_cast<std::size_t>(n), true);
  if (trapped.empty()) return sure;
  const auto leaks = detail::reverse_reach(m.matrix(), trapped, target);
  for (Index i = 0; i < n; ++i)
    if (i != target && leaks[static_cast<std::size_t>(i)]) sure[static_cast<std::size_t>(i)] = false;
  return sure;
}

}  // namespace ionet
