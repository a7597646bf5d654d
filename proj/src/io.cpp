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


#include "ptnm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ptnm::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x == 0.0 ? 0.0 : x);
  return buf;
}

double round_sig(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

json complex_to_json(cplx z) {
  return json::array({round_sig(z.real()), round_sig(z.imag())});
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index n = 0; n < v.size(); ++n) out.push_back(complex_to_json(v(n)));
  return out;
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw FormatError(field + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where.empty() ? "<root>" : where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(where.empty() ? key : where + "." + key, "missing field");
  return *it;
}

int require_int(const json& j, const char* key, int min_value) {
  const json& v = require(j, key, "");
  if (!v.is_number_integer()) bad(key, "expected an integer");
  const int x = v.get<int>();
  if (x < min_value) bad(key, "must be >= " + std::to_string(min_value));
  return x;
}

}  // namespace

cplx complex_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad(field, "expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) bad(field + "[0]", "expected a row array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      bad(rf, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  rf + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

CVector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "expected a nonempty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t n = 0; n < j.size(); ++n) {
    v(static_cast<Eigen::Index>(n)) =
        complex_from_json(j[n], field + "[" + std::to_string(n) + "]");
  }
  return v;
}

json channel_to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const auto& a : ch.ops) ops.push_back(matrix_to_json(a));
  return {{"d", ch.d}, {"env_dim", ch.env_dim}, {"kraus", std::move(ops)}};
}

KrausChannel channel_from_json(const json& j) {
  KrausChannel ch;
  ch.d = require_int(j, "d", 1);
  ch.env_dim = require_int(j, "env_dim", 1);
  const json& ops = require(j, "kraus", "");
  if (!ops.is_array() || ops.empty()) bad("kraus", "expected a nonempty array of matrices");
  const auto n = static_cast<Eigen::Index>(ch.d * ch.env_dim);
  for (std::size_t s = 0; s < ops.size(); ++s) {
    const std::string field = "kraus[" + std::to_string(s) + "]";
    CMatrix a = matrix_from_json(ops[s], field);
    if (a.rows() != n || a.cols() != n) {
      bad(field, "expected a " + std::to_string(n) + " x " + std::to_string(n) +
                     " matrix (d * env_dim)");
    }
    ch.ops.push_back(std::move(a));
  }
  return ch;
}

json ansatz_to_json(const ReconstructionAnsatz& a) {
  json entries = json::array();
  for (const auto& z : a.a_bar) entries.push_back(complex_to_json(z));
  return {{"d", a.d},
          {"env_dim", a.env_dim},
          {"rank", a.rank},
          {"a_bar", std::move(entries)},
          {"psi0", vector_to_json(a.psi0)}};
}

ReconstructionAnsatz ansatz_from_json(const json& j) {
  ReconstructionAnsatz a;
  a.d = require_int(j, "d", 1);
  a.env_dim = require_int(j, "env_dim", 1);
  a.rank = require_int(j, "rank", 1);
  const json& entries = require(j, "a_bar", "");
  const std::size_t expected = static_cast<std::size_t>(a.rank) * a.kraus_size();
  if (!entries.is_array() || entries.size() != expected) {
    bad("a_bar", "expected " + std::to_string(expected) + " entries (rank * (d env_dim)^2)");
  }
  for (std::size_t n = 0; n < entries.size(); ++n) {
    a.a_bar.push_back(complex_from_json(entries[n], "a_bar[" + std::to_string(n) + "]"));
  }
  a.psi0 = vector_from_json(require(j, "psi0", ""), "psi0");
  if (a.psi0.size() != a.d * a.env_dim) bad("psi0", "expected d * env_dim entries");
  // Stored values carry 12 digits; restore the exact unit norm.
  if (std::abs(a.psi0.norm() - 1.0) > 1e-9) bad("psi0", "not normalized");
  a.psi0.normalize();
  return a;
}

json report_to_json(const FitReport& r) {
  auto rounded = [](const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(round_sig(x));
    return out;
  };
  return {{"final_loss", round_sig(r.final_loss)},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"normalization_residual", round_sig(r.normalization_residual)},
          {"k_schedule", r.k_schedule},
          {"stage_losses", rounded(r.stage_losses)},
          {"best_restart", r.best_restart},
          {"restart_losses", rounded(r.restart_losses)},
          {"loss_history", rounded(r.loss_history)}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw FormatError(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ptnm::io
