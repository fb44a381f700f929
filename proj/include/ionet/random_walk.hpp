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

// Random-walk centralities computed from absorbing-chain linear algebra.
//
// Making sector k absorbing leaves the transient block Q = M with row and
// column k deleted. Per target k a single LU factorization of (I - Q) gives
//
//   mean first passage times   h   = (I - Q)^{-1} e      (solve with A)
//   expected visit counts      F   = (I - Q)^{-1}        (solve with I)
//   visits summed over sources y^T = e^T (I - Q)^{-1}    (solve with A^T)
//
// Conventions: H(i,i) = 0; on a walk j -> k the source visit at time zero is
// counted, and arriving at k counts as exactly one visit to k.

#pragma once

#include "ionet/errors.hpp"
#include "ionet/graph.hpp"
#include "ionet/parallel.hpp"
#include "ionet/types.hpp"

#include <Eigen/LU>

#include <cmath>
#include <vector>

namespace ionet {

struct WalkOptions {
  /// Max-norm bound on every linear-solve residual.
  double tol = 1e-9;
  /// Report unreachable pairs as infinite instead of failing.
  bool allow_unreachable = false;
  /// Counting betweenness without source and target contributions.
  bool exclude_endpoints = false;
  /// Estimated condition numbers above this are reported as ill-conditioned.
  double condition_warning = 1e12;
  /// 0 picks the hardware concurrency.
  unsigned workers = 0;
};

struct SolveDiagnostics {
  double max_condition = 1.0;
  std::vector<Index> ill_conditioned;  // targets, ascending
  /// Ordered (source, target) pairs whose walks are not surely absorbed.
  std::size_t dropped_pairs = 0;
};

/// Expected first-passage steps; steps(i, j) is from i to j, zero diagonal,
/// +inf where j is not reached with probability one.
template <typename Scalar>
struct MfptMatrix {
  MatrixX<Scalar> steps;
  SolveDiagnostics diagnostics;

  Index size() const { return steps.rows(); }
  Scalar operator()(Index from, Index to) const { return steps(from, to); }
};

/// First-passage times into one target, indexed by the surviving sources.
template <typename Scalar>
struct FirstPassage {
  Index target = 0;
  std::vector<Index> sources;  // original ids, target omitted
  VectorX<Scalar> steps;       // steps[r] is from sources[r]
  double condition = 1.0;
};

/// Expected visit counts on walks absorbed at one target.
/// visits(j, i) is the expectation for source j and visited node i; the row
/// of the target itself is NaN (no walk), and rows of sources that are not
/// surely absorbed are +inf.
template <typename Scalar>
struct VisitSlice {
  Index target = 0;
  MatrixX<Scalar> visits;

  Scalar operator()(Index source, Index node) const {
    if (source == target)
      throw OutOfRange("source equals target " + std::to_string(target + 1));
    return visits(source, node);
  }
};

namespace detail {

template <typename Scalar>
struct TargetSystem {
  Index target = 0;
  std::vector<Index> rows;  // sources surely absorbed at target
  MatrixX<Scalar> system;   // I - Q restricted to rows
  Eigen::PartialPivLU<MatrixX<Scalar>> lu;
  double condition = 1.0;
  std::size_t dropped = 0;
};

template <typename Scalar>
TargetSystem<Scalar> factor_target(const TransitionMatrix<Scalar>& m, Index target,
                                   const WalkOptions& opts) {
  const Index n = m.size();
  if (n < 2) throw OutOfRange("first passage needs at least two sectors");
  if (target < 0 || target >= n)
    throw OutOfRange("target " + std::to_string(target + 1) + " outside 1.." +
                     std::to_string(n));

  const auto sure = surely_absorbed(m, target);
  TargetSystem<Scalar> sys;
  sys.target = target;
  for (Index i = 0; i < n; ++i) {
    if (i == target) continue;
    if (sure[static_cast<std::size_t>(i)]) {
      sys.rows.push_back(i);
    } else if (!opts.allow_unreachable) {
      throw SingularSystem(target, "walks from sector " + std::to_string(i + 1) +
                                       " are not absorbed with probability one");
    } else {
      ++sys.dropped;
    }
  }

  const Index k = static_cast<Index>(sys.rows.size());
  sys.system.resize(k, k);
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c)
      sys.system(r, c) = (r == c ? Scalar(1) : Scalar(0)) - m(sys.rows[r], sys.rows[c]);
  if (k > 0) {
    sys.lu.compute(sys.system);
    const double rc = static_cast<double>(sys.lu.rcond());
    sys.condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  }
  return sys;
}

template <typename Derived, typename Other>
double residual_norm(const Eigen::MatrixBase<Derived>& lhs, const Eigen::MatrixBase<Other>& rhs) {
  if (lhs.size() == 0) return 0.0;
  return static_cast<double>((lhs - rhs).cwiseAbs().maxCoeff());
}

template <typename Scalar, typename Derived>
void check_residual(const TargetSystem<Scalar>& sys, const Eigen::MatrixBase<Derived>& solution,
                    const MatrixX<Scalar>& rhs, bool transposed, double tol) {
  if (!solution.allFinite())
    throw SingularSystem(sys.target, "solution is not finite");
  const double res = transposed
                         ? residual_norm(sys.system.transpose() * solution, rhs)
                         : residual_norm(sys.system * solution, rhs);
  if (!(res <= tol))
    throw SingularSystem(sys.target, "residual " + std::to_string(res) +
                                         " exceeds tolerance " + std::to_string(tol));
}

template <typename Scalar>
void note_condition(SolveDiagnostics& d, Index target, double condition, double limit) {
  if (condition > d.max_condition) d.max_condition = condition;
  if (condition > limit) d.ill_conditioned.push_back(target);
}

}  // namespace detail

/// Mean first-passage times from every other sector into `target`.
template <typename Scalar>
FirstPassage<Scalar> mfpt_to_target(const TransitionMatrix<Scalar>& m, Index target,
                                    const WalkOptions& opts = {}) {
  const auto sys = detail::factor_target(m, target, opts);
  const Index k = static_cast<Index>(sys.rows.size());
  const MatrixX<Scalar> ones = MatrixX<Scalar>::Ones(k, 1);
  MatrixX<Scalar> x(k, 1);
  if (k > 0) {
    x = sys.lu.solve(ones);
    detail::check_residual(sys, x, ones, false, opts.tol);
  }

  FirstPassage<Scalar> out;
  out.target = target;
  out.condition = sys.condition;
  out.steps = VectorX<Scalar>::Constant(m.size() - 1, infinity<Scalar>());
  Index r = 0;
  for (Index i = 0; i < m.size(); ++i) {
    if (i == target) continue;
    out.sources.push_back(i);
  }
  for (Index s = 0; s < static_cast<Index>(out.sources.size()); ++s)
    if (r < k && sys.rows[r] == out.sources[s]) out.steps[s] = x(r++, 0);
  return out;
}

/// All-pairs first-passage times, one target per (parallel) task.
template <typename Scalar>
MfptMatrix<Scalar> mfpt_matrix(const TransitionMatrix<Scalar>& m, const WalkOptions& opts = {}) {
  const Index n = m.size();
  std::vector<FirstPassage<Scalar>> columns(static_cast<std::size_t>(n));
  detail::parallel_for(static_cast<std::size_t>(n), opts.workers, [&](std::size_t j) {
    columns[j] = mfpt_to_target(m, static_cast<Index>(j), opts);
  });

  MfptMatrix<Scalar> h;
  h.steps = MatrixX<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const auto& col = columns[static_cast<std::size_t>(j)];
    for (Index s = 0; s < static_cast<Index>(col.sources.size()); ++s) {
      h.steps(col.sources[s], j) = col.steps[s];
      if (std::isinf(static_cast<double>(col.steps[s]))) ++h.diagnostics.dropped_pairs;
    }
    detail::note_condition<Scalar>(h.diagnostics, j, col.condition, opts.condition_warning);
  }
  return h;
}

/// Score i is n divided by the summed first-passage times into i. Infinite
/// entries make the score undefined: an error unless `allow_undefined`, in
/// which case they are left out of the sum and the score is flagged.
template <typename Scalar>
CentralityVector<Scalar> random_walk_centrality(const MfptMatrix<Scalar>& h,
                                                bool allow_undefined = false) {
  const Index n = h.size();
  CentralityVector<Scalar> c(Measure::RandomWalkCentrality, VectorX<Scalar>::Zero(n));
  c.meta.dropped_pairs = h.diagnostics.dropped_pairs;
  for (Index i = 0; i < n; ++i) {
    Scalar total(0);
    bool undefined = false;
    for (Index j = 0; j < n; ++j) {
      const Scalar v = h(j, i);
      if (std::isinf(static_cast<double>(v))) {
        undefined = true;
        continue;
      }
      total += v;
    }
    if (undefined && !allow_undefined)
      throw UndefinedScore(static_cast<std::size_t>(i), "random walk centrality");
    c.scores[i] = Scalar(n) / total;
    c.undefined[static_cast<std::size_t>(i)] = undefined;
  }
  return c;
}

/// Expected visits to every node on first-passage walks into `target`.
template <typename Scalar>
VisitSlice<Scalar> visit_counts(const TransitionMatrix<Scalar>& m, Index target,
                                const WalkOptions& opts = {}) {
  const auto sys = detail::factor_target(m, target, opts);
  const Index n = m.size();
  const Index k = static_cast<Index>(sys.rows.size());
  const MatrixX<Scalar> identity = MatrixX<Scalar>::Identity(k, k);
  MatrixX<Scalar> fundamental(k, k);
  if (k > 0) {
    fundamental = sys.lu.solve(identity);
    detail::check_residual(sys, fundamental, identity, false, opts.tol);
  }

  VisitSlice<Scalar> out;
  out.target = target;
  out.visits = MatrixX<Scalar>::Constant(n, n, infinity<Scalar>());
  out.visits.row(target).setConstant(std::numeric_limits<Scalar>::quiet_NaN());
  for (Index r = 0; r < k; ++r) {
    const Index source = sys.rows[r];
    out.visits.row(source).setZero();
    for (Index c = 0; c < k; ++c) out.visits(source, sys.rows[c]) = fundamental(r, c);
    out.visits(source, target) = Scalar(1);
  }
  return out;
}

namespace detail {

/// Contribution of every walk absorbed at sys.target to each node's visit
/// total, i.e. the sum over sources j of N^{j,target}(i).
template <typename Scalar>
VectorX<Scalar> target_visit_totals(const TargetSystem<Scalar>& sys, Index n,
                                    const WalkOptions& opts) {
  const Index k = static_cast<Index>(sys.rows.size());
  VectorX<Scalar> totals = VectorX<Scalar>::Zero(n);
  if (k == 0) return totals;

  const MatrixX<Scalar> ones = MatrixX<Scalar>::Ones(k, 1);
  MatrixX<Scalar> column_sums = sys.lu.transpose().solve(ones);
  check_residual(sys, column_sums, ones, true, opts.tol);

  if (opts.exclude_endpoints) {
    // Only visits by walks that neither start nor end at the node count.
    const MatrixX<Scalar> identity = MatrixX<Scalar>::Identity(k, k);
    const MatrixX<Scalar> fundamental = sys.lu.solve(identity);
    check_residual(sys, fundamental, identity, false, opts.tol);
    for (Index r = 0; r < k; ++r) totals[sys.rows[r]] = column_sums(r, 0) - fundamental(r, r);
  } else {
    for (Index r = 0; r < k; ++r) totals[sys.rows[r]] = column_sums(r, 0);
    totals[sys.target] = Scalar(k);
  }
  return totals;
}

template <typename Scalar>
CentralityVector<Scalar> reduce_counting_betweenness(const std::vector<VectorX<Scalar>>& per_target,
                                                     Index n, const WalkOptions& opts,
                                                     std::size_t dropped) {
  VectorX<Scalar> sum = VectorX<Scalar>::Zero(n);
  for (const auto& t : per_target) sum += t;
  const Scalar pairs = Scalar(n) * Scalar(n - 1);
  MeasureMeta meta;
  meta.tol = opts.tol;
  meta.endpoints_excluded = opts.exclude_endpoints;
  meta.dropped_pairs = dropped;
  return CentralityVector<Scalar>(Measure::CountingBetweenness, sum / pairs, meta);
}

}  // namespace detail

/// Average expected visits to each node over all ordered source-target
/// first-passage walks, normalized by n(n-1).
template <typename Scalar>
CentralityVector<Scalar> counting_betweenness(const TransitionMatrix<Scalar>& m,
                                              const WalkOptions& opts = {}) {
  const Index n = m.size();
  std::vector<VectorX<Scalar>> per_target(static_cast<std::size_t>(n));
  std::vector<std::size_t> dropped(static_cast<std::size_t>(n), 0);
  detail::parallel_for(static_cast<std::size_t>(n), opts.workers, [&](std::size_t k) {
    const auto sys = detail::factor_target(m, static_cast<Index>(k), opts);
    per_target[k] = detail::target_visit_totals(sys, n, opts);
    dropped[k] = sys.dropped;
  });
  std::size_t total_dropped = 0;
  for (auto d : dropped) total_dropped += d;
  return detail::reduce_counting_betweenness(per_target, n, opts, total_dropped);
}

/// Both random-walk measures from one factorization per target.
template <typename Scalar>
struct RandomWalkResult {
  MfptMatrix<Scalar> mfpt;
  CentralityVector<Scalar> closeness;    // RWC
  CentralityVector<Scalar> betweenness;  // CBET
};

template <typename Scalar>
RandomWalkResult<Scalar> random_walk_measures(const TransitionMatrix<Scalar>& m,
                                              const WalkOptions& opts = {}) {
  const Index n = m.size();
  std::vector<VectorX<Scalar>> passage(static_cast<std::size_t>(n));
  std::vector<VectorX<Scalar>> visits(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(n));
  std::vector<double> condition(static_cast<std::size_t>(n), 1.0);
  std::vector<std::size_t> dropped(static_cast<std::size_t>(n), 0);

  detail::parallel_for(static_cast<std::size_t>(n), opts.workers, [&](std::size_t j) {
    auto sys = detail::factor_target(m, static_cast<Index>(j), opts);
    const Index k = static_cast<Index>(sys.rows.size());
    if (k > 0) {
      const MatrixX<Scalar> ones = MatrixX<Scalar>::Ones(k, 1);
      MatrixX<Scalar> x = sys.lu.solve(ones);
      detail::check_residual(sys, x, ones, false, opts.tol);
      passage[j] = x.col(0);
    }
    visits[j] = detail::target_visit_totals(sys, n, opts);
    rows[j] = std::move(sys.rows);
    condition[j] = sys.condition;
    dropped[j] = sys.dropped;
  });

  RandomWalkResult<Scalar> out;
  out.mfpt.steps = MatrixX<Scalar>::Constant(n, n, infinity<Scalar>());
  std::size_t total_dropped = 0;
  for (Index j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    out.mfpt.steps(j, j) = Scalar(0);
    for (Index r = 0; r < static_cast<Index>(rows[sj].size()); ++r)
      out.mfpt.steps(rows[sj][static_cast<std::size_t>(r)], j) = passage[sj][r];
    detail::note_condition<Scalar>(out.mfpt.diagnostics, j, condition[sj], opts.condition_warning);
    total_dropped += dropped[sj];
  }
  out.mfpt.diagnostics.dropped_pairs = total_dropped;
  out.closeness = random_walk_centrality(out.mfpt, opts.allow_unreachable);
  out.closeness.meta.tol = opts.tol;
  out.betweenness = detail::reduce_counting_betweenness(visits, n, opts, total_dropped);
  return out;
}

}  // namespace ionet
