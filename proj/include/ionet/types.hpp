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

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ionet {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// One row/column of the network. The id is the position in the owning
/// container (0-based); files and reports print it 1-based.
struct Sector {
  std::string label;
  std::optional<std::string> code;

  bool operator==(const Sector&) const = default;
};

using SectorList = std::vector<Sector>;

/// Sectors labelled "Sector 1" ... "Sector n".
inline SectorList default_sectors(std::size_t n) {
  SectorList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({"Sector " + std::to_string(i + 1), std::nullopt});
  return out;
}

enum class Measure {
  RandomWalkCentrality,   // RWC, immediate effects
  CountingBetweenness,    // CBET, mediative effects
  Closeness,              // CLO, binary Freeman closeness
  Betweenness,            // BET, binary Freeman betweenness
  WeightedCloseness,      // WCLO
  WeightedBetweenness,    // WBET
  OutputMultiplier,       // OUTMULT
  EmploymentMultiplier,   // EMPMULT
};

std::string_view measure_tag(Measure m);
std::string_view measure_label(Measure m);
/// Accepts the short tag ("RWC") case-insensitively. Throws UnknownMeasure.
Measure parse_measure(std::string_view tag);

/// Parameters a score was computed with.
struct MeasureMeta {
  std::optional<double> alpha;
  std::optional<double> tol;
  bool normalized = false;
  bool endpoints_excluded = false;
  /// Ordered (source, target) pairs left out because the walk from source is
  /// not absorbed at target with probability one.
  std::size_t dropped_pairs = 0;
};

/// Per-sector scores for one measure. Undefined entries keep whatever partial
/// value was computed but are flagged, and rank last.
template <typename Scalar>
struct CentralityVector {
  Measure measure{};
  VectorX<Scalar> scores;
  std::vector<bool> undefined;
  MeasureMeta meta;

  CentralityVector() = default;
  CentralityVector(Measure m, VectorX<Scalar> s, MeasureMeta md = {})
      : measure(m),
        scores(std::move(s)),
        undefined(static_cast<std::size_t>(scores.size()), false),
        meta(md) {}

  Index size() const { return scores.size(); }
  bool is_defined(Index i) const { return !undefined[static_cast<std::size_t>(i)]; }
  bool any_undefined() const {
    for (bool u : undefined)
      if (u) return true;
    return false;
  }
};

template <typename Scalar>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

}  // namespace ionet
