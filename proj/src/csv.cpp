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

#include "ionet/csv.hpp"

#include "ionet/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ionet::csv {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<Line> read_records(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    out.push_back({number, split_record(raw, number)});
  }
  return out;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path.string() + "'");
  return in;
}

bool parse_id(std::string_view field, long& out) {
  field = trim(field);
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc{} && ptr == end && !field.empty();
}

long expect_id(const std::string& field, std::size_t line, std::size_t col) {
  long id = 0;
  if (!parse_id(field, id))
    throw ParseError(line, col, "expected an integer sector id, found '" + field + "'");
  return id;
}

void expect_width(const Line& l, std::size_t width) {
  if (l.fields.size() != width)
    throw ParseError(l.number, std::min(l.fields.size(), width) + 1,
                     "expected " + std::to_string(width) + " fields, found " +
                         std::to_string(l.fields.size()));
}

struct ParsedMatrix {
  MatrixX<double> values;
  SectorList sectors;
};

ParsedMatrix parse_matrix(const std::vector<Line>& lines, bool reject_negative) {
  if (lines.empty()) throw ParseError(1, 0, "empty matrix file");
  const Line& header = lines.front();
  if (std::string(trim(header.fields[0])) != "sector_id")
    throw ParseError(header.number, 1, "header must start with 'sector_id'");
  const bool labelled = header.fields.size() > 1 && std::string(trim(header.fields[1])) == "label";
  const std::size_t first = labelled ? 2 : 1;
  if (header.fields.size() <= first) throw ParseError(header.number, first + 1, "no sector columns");
  const std::size_t n = header.fields.size() - first;

  for (std::size_t c = first; c < header.fields.size(); ++c) {
    const long id = expect_id(header.fields[c], header.number, c + 1);
    if (id != static_cast<long>(c - first + 1))
      throw ParseError(header.number, c + 1,
                       "sector ids must be 1.." + std::to_string(n) + " in order");
  }
  if (lines.size() - 1 != n)
    throw DimensionMismatch(std::to_string(n) + " columns but " + std::to_string(lines.size() - 1) +
                            " data rows");

  ParsedMatrix out;
  out.values.resize(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const Line& l = lines[r + 1];
    expect_width(l, header.fields.size());
    const long id = expect_id(l.fields[0], l.number, 1);
    if (id != static_cast<long>(r + 1))
      throw ParseError(l.number, 1, "expected row for sector " + std::to_string(r + 1));
    std::string label = labelled ? std::string(trim(l.fields[1])) : "Sector " + std::to_string(r + 1);
    if (label.empty()) throw ParseError(l.number, 2, "empty sector label");
    out.sectors.push_back({std::move(label), std::nullopt});
    for (std::size_t c = 0; c < n; ++c) {
      const double v = parse_number(l.fields[first + c], l.number, first + c + 1);
      if (!std::isfinite(v))
        throw NonFinite("line " + std::to_string(l.number) + ", column " + std::to_string(first + c + 1));
      if (reject_negative && v < 0.0)
        throw DomainError("negative flow at line " + std::to_string(l.number) + ", column " +
                          std::to_string(first + c + 1));
      out.values(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  return out;
}

VectorX<double> parse_sector_vector(const std::vector<Line>& lines, Index n) {
  std::size_t start = 0;
  long probe = 0;
  if (!lines.empty() && !parse_id(lines.front().fields[0], probe)) start = 1;

  VectorX<double> out = VectorX<double>::Zero(n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (std::size_t r = start; r < lines.size(); ++r) {
    const Line& l = lines[r];
    expect_width(l, 2);
    const long id = expect_id(l.fields[0], l.number, 1);
    if (id < 1 || id > n)
      throw ParseError(l.number, 1, "sector id " + std::to_string(id) + " outside 1.." + std::to_string(n));
    if (seen[static_cast<std::size_t>(id - 1)])
      throw ParseError(l.number, 1, "duplicate sector id " + std::to_string(id));
    seen[static_cast<std::size_t>(id - 1)] = true;
    const double v = parse_number(l.fields[1], l.number, 2);
    if (!std::isfinite(v)) throw NonFinite("line " + std::to_string(l.number));
    out[id - 1] = v;
  }
  for (Index i = 0; i < n; ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw DimensionMismatch("no value for sector " + std::to_string(i + 1));
  return out;
}

}  // namespace

std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      if (!std::string(trim(current)).empty())
        throw ParseError(line_no, fields.size() + 1, "quote inside unquoted field");
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(ch);
    }
  }
  if (quoted) throw ParseError(line_no, fields.size() + 1, "unterminated quote");
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

std::string quote(std::string_view field) {
  const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_number(std::string_view field, std::size_t line, std::size_t col) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end)
    throw ParseError(line, col, "not a number: '" + std::string(field) + "'");
  return v;
}

FlowMatrix<double> read_flows(std::istream& in) {
  auto parsed = parse_matrix(read_records(in), true);
  return FlowMatrix<double>(std::move(parsed.values), std::move(parsed.sectors));
}

FlowMatrix<double> read_flows(const std::filesystem::path& path) {
  auto in = open(path);
  return read_flows(in);
}

void write_flows(std::ostream& out, const FlowMatrix<double>& flows) {
  const Index n = flows.size();
  const auto defaults = default_sectors(static_cast<std::size_t>(n));
  const bool labelled = flows.sectors() != defaults;
  out << "sector_id";
  if (labelled) out << ",label";
  for (Index j = 0; j < n; ++j) out << ',' << (j + 1);
  out << '\n';
  for (Index i = 0; i < n; ++i) {
    out << (i + 1);
    if (labelled) out << ',' << quote(flows.sectors()[static_cast<std::size_t>(i)].label);
    for (Index j = 0; j < n; ++j) out << ',' << format_number(flows.values()(i, j));
    out << '\n';
  }
}

void write_flows(const std::filesystem::path& path, const FlowMatrix<double>& flows) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  write_flows(out, flows);
}

VectorX<double> read_sector_vector(std::istream& in, Index n) {
  return parse_sector_vector(read_records(in), n);
}

VectorX<double> read_sector_vector(const std::filesystem::path& path, Index n) {
  auto in = open(path);
  return read_sector_vector(in, n);
}

RpcData read_rpc(std::istream& in, Index n) {
  const auto lines = read_records(in);
  if (lines.empty()) throw ParseError(1, 0, "empty RPC file");
  const auto& head = lines.front().fields;
  long probe = 0;
  const bool matrix = std::string(trim(head[0])) == "sector_id" && head.size() >= 2 &&
                      (parse_id(head[1], probe) || std::string(trim(head[1])) == "label");
  if (!matrix) return parse_sector_vector(lines, n);
  auto parsed = parse_matrix(lines, false);
  if (parsed.values.rows() != n)
    throw DimensionMismatch("RPC matrix has " + std::to_string(parsed.values.rows()) +
                            " sectors, flows have " + std::to_string(n));
  return parsed.values;
}

RpcData read_rpc(const std::filesystem::path& path, Index n) {
  auto in = open(path);
  return read_rpc(in, n);
}

AggregationMap read_aggregation(std::istream& in, Index fine_size) {
  const auto lines = read_records(in);
  std::size_t start = 0;
  long probe = 0;
  if (!lines.empty() && !parse_id(lines.front().fields[0], probe)) start = 1;

  AggregationMap map;
  map.coarse_of.assign(static_cast<std::size_t>(fine_size), -1);
  std::map<long, std::string> labels;
  for (std::size_t r = start; r < lines.size(); ++r) {
    const Line& l = lines[r];
    expect_width(l, 3);
    const long fine = expect_id(l.fields[0], l.number, 1);
    const long coarse = expect_id(l.fields[1], l.number, 2);
    if (fine < 1 || fine > fine_size)
      throw ParseError(l.number, 1, "fine id " + std::to_string(fine) + " outside 1.." +
                                        std::to_string(fine_size));
    if (coarse < 1) throw ParseError(l.number, 2, "coarse ids start at 1");
    auto& slot = map.coarse_of[static_cast<std::size_t>(fine - 1)];
    if (slot >= 0) throw ParseError(l.number, 1, "fine id " + std::to_string(fine) + " mapped twice");
    slot = coarse - 1;
    const std::string& label = l.fields[2];
    if (label.empty()) throw ParseError(l.number, 3, "empty coarse label");
    auto [it, inserted] = labels.emplace(coarse, label);
    if (!inserted && it->second != label)
      throw ParseError(l.number, 3, "coarse id " + std::to_string(coarse) + " already labelled '" +
                                        it->second + "'");
  }
  long expected = 1;
  for (const auto& [id, label] : labels) {
    if (id != expected) throw DomainError("coarse ids are not contiguous: missing " + std::to_string(expected));
    map.coarse_sectors.push_back({label, std::nullopt});
    ++expected;
  }
  return map;
}

AggregationMap read_aggregation(const std::filesystem::path& path, Index fine_size) {
  auto in = open(path);
  return read_aggregation(in, fine_size);
}

void write_matrix(std::ostream& out, const MatrixX<double>& m) {
  out << "sector_id";
  for (Index j = 0; j < m.cols(); ++j) out << ',' << (j + 1);
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    out << (i + 1);
    for (Index j = 0; j < m.cols(); ++j) out << ',' << format_number(m(i, j));
    out << '\n';
  }
}

}  // namespace ionet::csv
