// Copyright 2026 The ptnm Authors
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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ptnm/channels.hpp"
#include "ptnm/reconstruct.hpp"

namespace ptnm::io {

using json = nlohmann::json;

/// Every float leaves the library with this many significant digits.
inline constexpr int kSignificantDigits = 12;

std::string format_number(double x);
/// x rounded to kSignificantDigits, so JSON output carries the same digits.
double round_sig(double x);

// Complex numbers are [re, im] pairs; matrices are arrays of rows.
json complex_to_json(cplx z);
json matrix_to_json(const CMatrix& m);
json vector_to_json(const CVector& v);
/// Parsers name `field` (a JSON path such as "kraus[2]") in their errors.
cplx complex_from_json(const json& j, const std::string& field);
CMatrix matrix_from_json(const json& j, const std::string& field);
CVector vector_from_json(const json& j, const std::string& field);

/// {"d", "env_dim", "kraus": [matrix, ...]}.
json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const json& j);

/// {"d", "env_dim", "rank", "a_bar": [[re, im], ...], "psi0": [[re, im], ...]}.
json ansatz_to_json(const ReconstructionAnsatz& a);
ReconstructionAnsatz ansatz_from_json(const json& j);

json report_to_json(const FitReport& r);

/// Reads a whole file; FormatError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);
/// Parses JSON, reporting the file and byte offset of syntax errors.
json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace ptnm::io
