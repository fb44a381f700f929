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

// File formats (UTF-8, LF, '.' decimal separator, sector ids 1-based):
//
//   flow matrix     sector_id,1,2,...,n          (optional: sector_id,label,1,...,n)
//                   1,v11,v12,...                (           1,Crop farming,v11,...)
//   sector vector   sector_id,value              (header optional)
//                   1,v1
//   aggregation     fine_id,coarse_id,coarse_label  (header optional)
//
// Row i of a flow matrix is the purchases made by sector i. Fields may be
// double-quoted; numbers are written as the shortest string that reads back
// to the same double.

#pragma once

#include "ionet/graph.hpp"
#include "ionet/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ionet::csv {

/// Splits one CSV record, honoring double quotes. Throws ParseError.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

/// Shortest round-trip representation; "inf"/"-inf"/"nan" for non-finite.
std::string format_number(double v);

/// Parses a full field as a double; throws ParseError on anything else.
double parse_number(std::string_view field, std::size_t line, std::size_t col);

FlowMatrix<double> read_flows(std::istream& in);
FlowMatrix<double> read_flows(const std::filesystem::path& path);
/// Writes labels only when some label differs from the default "Sector <id>".
void write_flows(std::ostream& out, const FlowMatrix<double>& flows);
void write_flows(const std::filesystem::path& path, const FlowMatrix<double>& flows);

/// Reads a per-sector column for exactly `n` sectors (every id once).
VectorX<double> read_sector_vector(std::istream& in, Index n);
VectorX<double> read_sector_vector(const std::filesystem::path& path, Index n);

/// RPCs come either as a full matrix (flow-matrix layout) or as a per-sector
/// vector applied to the supplying sector's column.
using RpcData = std::variant<MatrixX<double>, VectorX<double>>;
RpcData read_rpc(std::istream& in, Index n);
RpcData read_rpc(const std::filesystem::path& path, Index n);

AggregationMap read_aggregation(std::istream& in, Index fine_size);
AggregationMap read_aggregation(const std::filesystem::path& path, Index fine_size);

/// Square matrix with 1-based sector ids on both axes (first-passage dumps).
void write_matrix(std::ostream& out, const MatrixX<double>& m);

}  // namespace ionet::csv
