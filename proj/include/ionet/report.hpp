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

#include "ionet/types.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ionet {

/// Marker printed next to undefined scores and their ranks.
inline constexpr std::string_view kUndefinedMarker = "UNDEF";

/// Scores within this relative distance of each other are ranked as ties.
inline constexpr double kRankTieTolerance = 1e-12;

/// True when a and b tie under kRankTieTolerance.
bool scores_tie(double a, double b);

/// Competition ranking ("1224"): equal scores share the smallest position and
/// the following positions are skipped. Undefined entries (mask true) come
/// after every defined one, ordered by id.
std::vector<int> rank(std::span<const double> scores, bool descending = true,
                      const std::vector<bool>& undefined = {});
std::vector<int> rank(const CentralityVector<double>& scores, bool descending = true);

/// Spearman's rho between two rankings, ties replaced by their average
/// position. NaN when either ranking is constant.
double spearman(std::span<const int> a, std::span<const int> b);

struct RankColumn {
  Measure measure{};
  std::string header;
  MeasureMeta meta;
};

struct RankRow {
  Index id = 0;  // 0-based sector id
  std::string label;
  std::vector<double> scores;
  std::vector<int> ranks;
  std::vector<bool> undefined;
};

/// Sectors joined with their ranks under several measures, rows in id order.
struct RankTable {
  std::vector<RankColumn> columns;
  std::vector<RankRow> rows;

  /// Matches a column header exactly or a measure tag (first column with that
  /// tag). Throws UnknownMeasure.
  std::size_t column_index(std::string_view key) const;
};

/// Column header for a measure, e.g. "Weighted Closeness (alpha=1.5)".
std::string column_header(const CentralityVector<double>& c);

/// Every measure is ranked descending (larger score = rank 1).
RankTable make_rank_table(const SectorList& sectors,
                          const std::vector<CentralityVector<double>>& measures);

/// First n rows by rank in `column`, stable by sector id. Ties at the cutoff
/// are kept only while rows remain.
RankTable top_n(const RankTable& table, std::string_view column, std::size_t n);

enum class OutputFormat { Csv, Json };

/// sector_id, description, one rank column per measure.
void write_rank_table(std::ostream& out, const RankTable& table, OutputFormat fmt);

/// sector_id, description, score, rank for a single measure.
void write_scores(std::ostream& out, const SectorList& sectors, const CentralityVector<double>& c,
                  OutputFormat fmt);

/// "Order" column then, per measure, the labels of the top n sectors.
void write_top_table(std::ostream& out, const RankTable& table, std::size_t n, OutputFormat fmt);

/// Square matrix of pairwise Spearman correlations between table columns.
void write_spearman(std::ostream& out, const RankTable& table, OutputFormat fmt);

}  // namespace ionet
