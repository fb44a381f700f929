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

#include "ionet/report.hpp"

#include "ionet/csv.hpp"
#include "ionet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

namespace ionet {

namespace {

struct MeasureNames {
  Measure measure;
  std::string_view tag;
  std::string_view label;
};

constexpr std::array<MeasureNames, 8> kMeasures{{
    {Measure::RandomWalkCentrality, "RWC", "Random Walk Centrality"},
    {Measure::CountingBetweenness, "CBET", "Counting Betweenness Centrality"},
    {Measure::Closeness, "CLO", "Closeness"},
    {Measure::Betweenness, "BET", "Betweenness"},
    {Measure::WeightedCloseness, "WCLO", "Weighted Closeness"},
    {Measure::WeightedBetweenness, "WBET", "Weighted Betweenness"},
    {Measure::OutputMultiplier, "OUTMULT", "Output Multiplier"},
    {Measure::EmploymentMultiplier, "EMPMULT", "Employment Multiplier"},
}};

const MeasureNames& names(Measure m) {
  for (const auto& n : kMeasures)
    if (n.measure == m) return n;
  return kMeasures.front();
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string rank_cell(int rank, bool undefined) {
  std::string s = std::to_string(rank);
  if (undefined) {
    s += ' ';
    s += kUndefinedMarker;
  }
  return s;
}

nlohmann::ordered_json rank_json(int rank, bool undefined) {
  if (undefined) return rank_cell(rank, true);
  return rank;
}

std::string score_cell(double v, bool undefined) {
  return undefined ? std::string(kUndefinedMarker) : csv::format_number(v);
}

/// Average positions (1-based) for a competition ranking; ties share the
/// mean of the positions they occupy.
std::vector<double> average_ranks(std::span<const int> r) {
  const std::size_t n = r.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r[a] < r[b]; });
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && r[order[j]] == r[order[i]]) ++j;
    const double avg = (double(i + 1) + double(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) out[order[k]] = avg;
    i = j;
  }
  return out;
}

}  // namespace

std::string_view measure_tag(Measure m) { return names(m).tag; }
std::string_view measure_label(Measure m) { return names(m).label; }

Measure parse_measure(std::string_view tag) {
  for (const auto& n : kMeasures)
    if (iequals(n.tag, tag)) return n.measure;
  throw UnknownMeasure(std::string(tag));
}

bool scores_tie(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kRankTieTolerance * std::max(std::abs(a), std::abs(b));
}

std::vector<int> rank(std::span<const double> scores, bool descending,
                      const std::vector<bool>& undefined) {
  const std::size_t n = scores.size();
  auto is_undef = [&](std::size_t i) { return i < undefined.size() && undefined[i]; };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (is_undef(a) != is_undef(b)) return !is_undef(a);
    if (is_undef(a)) return false;
    return descending ? scores[a] > scores[b] : scores[a] < scores[b];
  });

  // Each tie group is anchored at its first (best) member so near-ties never chain.
  std::vector<int> out(n, 0);
  std::size_t anchor = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    if (pos > 0 && !is_undef(i) && !is_undef(order[anchor]) &&
        scores_tie(scores[i], scores[order[anchor]])) {
      out[i] = out[order[anchor]];
    } else {
      out[i] = static_cast<int>(pos + 1);
      anchor = pos;
    }
  }
  return out;
}

std::vector<int> rank(const CentralityVector<double>& c, bool descending) {
  return rank(std::span<const double>(c.scores.data(), static_cast<std::size_t>(c.scores.size())),
              descending, c.undefined);
}

double spearman(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw DimensionMismatch("rankings of length " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  if (a.size() < 2) throw DimensionMismatch("spearman needs at least two items");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return std::nan("");
  return cov / std::sqrt(va * vb);
}

std::size_t RankTable::column_index(std::string_view key) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c].header == key) return c;
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (iequals(measure_tag(columns[c].measure), key)) return c;
  throw UnknownMeasure(std::string(key));
}

std::string column_header(const CentralityVector<double>& c) {
  std::string h(measure_label(c.measure));
  if ((c.measure == Measure::WeightedCloseness || c.measure == Measure::WeightedBetweenness) &&
      c.meta.alpha)
    h += " (alpha=" + csv::format_number(*c.meta.alpha) + ")";
  if (c.meta.normalized) h += " (normalized)";
  if (c.meta.endpoints_excluded) h += " (endpoints excluded)";
  return h;
}

RankTable make_rank_table(const SectorList& sectors,
                          const std::vector<CentralityVector<double>>& measures) {
  RankTable t;
  for (const auto& m : measures) {
    if (m.size() != static_cast<Index>(sectors.size()))
      throw DimensionMismatch(std::string(measure_tag(m.measure)) + " has " +
                              std::to_string(m.size()) + " scores for " +
                              std::to_string(sectors.size()) + " sectors");
    t.columns.push_back({m.measure, column_header(m), m.meta});
  }
  std::vector<std::vector<int>> ranks;
  for (const auto& m : measures) ranks.push_back(rank(m, true));
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    RankRow row;
    row.id = static_cast<Index>(i);
    row.label = sectors[i].label;
    for (std::size_t c = 0; c < measures.size(); ++c) {
      row.scores.push_back(measures[c].scores[static_cast<Index>(i)]);
      row.ranks.push_back(ranks[c][i]);
      row.undefined.push_back(measures[c].undefined[i]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

RankTable top_n(const RankTable& table, std::string_view column, std::size_t n) {
  const std::size_t c = table.column_index(column);
  RankTable out;
  out.columns = table.columns;
  out.rows = table.rows;
  std::stable_sort(out.rows.begin(), out.rows.end(), [c](const RankRow& a, const RankRow& b) {
    if (a.ranks[c] != b.ranks[c]) return a.ranks[c] < b.ranks[c];
    return a.id < b.id;
  });
  if (out.rows.size() > n) out.rows.resize(n);
  return out;
}

void write_rank_table(std::ostream& out, const RankTable& table, OutputFormat fmt) {
  if (fmt == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    doc["columns"].push_back("sector_id");
    doc["columns"].push_back("description");
    for (const auto& col : table.columns) doc["columns"].push_back(col.header);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r;
      r["sector_id"] = row.id + 1;
      r["description"] = row.label;
      for (std::size_t c = 0; c < table.columns.size(); ++c)
        r[table.columns[c].header] = rank_json(row.ranks[c], row.undefined[c]);
      doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "sector_id,description";
  for (const auto& col : table.columns) out << ',' << csv::quote(col.header);
  out << '\n';
  for (const auto& row : table.rows) {
    out << (row.id + 1) << ',' << csv::quote(row.label);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << ',' << rank_cell(row.ranks[c], row.undefined[c]);
    out << '\n';
  }
}

void write_scores(std::ostream& out, const SectorList& sectors, const CentralityVector<double>& c,
                  OutputFormat fmt) {
  const auto ranks = rank(c, true);
  const std::string tag(measure_tag(c.measure));
  if (fmt == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["measure"] = tag;
    doc["header"] = column_header(c);
    if (c.meta.alpha) doc["alpha"] = *c.meta.alpha;
    if (c.meta.tol) doc["tol"] = *c.meta.tol;
    doc["columns"] = {"sector_id", "description", tag, "rank"};
    doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < sectors.size(); ++i) {
      const bool undef = c.undefined[i];
      nlohmann::ordered_json r;
      r["sector_id"] = i + 1;
      r["description"] = sectors[i].label;
      if (undef)
        r[tag] = std::string(kUndefinedMarker);
      else
        r[tag] = c.scores[static_cast<Index>(i)];
      r["rank"] = rank_json(ranks[i], undef);
      doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "sector_id,description," << tag << ",rank\n";
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    const bool undef = c.undefined[i];
    out << (i + 1) << ',' << csv::quote(sectors[i].label) << ','
        << score_cell(c.scores[static_cast<Index>(i)], undef) << ',' << rank_cell(ranks[i], undef)
        << '\n';
  }
}

void write_top_table(std::ostream& out, const RankTable& table, std::size_t n, OutputFormat fmt) {
  std::vector<RankTable> tops;
  for (const auto& col : table.columns) tops.push_back(top_n(table, col.header, n));
  const std::size_t rows = std::min(n, table.rows.size());
  if (fmt == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    doc["columns"].push_back("Order");
    for (const auto& col : table.columns) doc["columns"].push_back(col.header);
    doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rows; ++r) {
      nlohmann::ordered_json row;
      row["Order"] = r + 1;
      for (std::size_t c = 0; c < table.columns.size(); ++c)
        row[table.columns[c].header] = tops[c].rows[r].label;
      doc["rows"].push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "Order";
  for (const auto& col : table.columns) out << ',' << csv::quote(col.header);
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    out << (r + 1);
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << ',' << csv::quote(tops[c].rows[r].label);
    out << '\n';
  }
}

void write_spearman(std::ostream& out, const RankTable& table, OutputFormat fmt) {
  const std::size_t m = table.columns.size();
  std::vector<std::vector<int>> ranks(m);
  for (const auto& row : table.rows)
    for (std::size_t c = 0; c < m; ++c) ranks[c].push_back(row.ranks[c]);
  std::vector<std::vector<double>> rho(m, std::vector<double>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) rho[a][b] = spearman(ranks[a], ranks[b]);

  if (fmt == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    doc["columns"].push_back("measure");
    for (const auto& col : table.columns) doc["columns"].push_back(col.header);
    doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < m; ++a) {
      nlohmann::ordered_json row;
      row["measure"] = table.columns[a].header;
      for (std::size_t b = 0; b < m; ++b)
        row[table.columns[b].header] = std::isnan(rho[a][b]) ? nlohmann::ordered_json("nan")
                                                             : nlohmann::ordered_json(rho[a][b]);
      doc["rows"].push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "measure";
  for (const auto& col : table.columns) out << ',' << csv::quote(col.header);
  out << '\n';
  for (std::size_t a = 0; a < m; ++a) {
    out << csv::quote(table.columns[a].header);
    for (std::size_t b = 0; b < m; ++b) out << ',' << csv::format_number(rho[a][b]);
    out << '\n';
  }
}

}  // namespace ionet
