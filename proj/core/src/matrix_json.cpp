// Copyright 2026 The timebin-qpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tbq/matrix_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tbq/errors.hpp"

namespace tbq {

double round_significant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m, std::string_view basis_ordering) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(round_significant(m(i, j).real()));
      im_row.push_back(round_significant(m(i, j).imag()));
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  nlohmann::json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  if (!basis_ordering.empty()) out["basis_ordering"] = std::string(basis_ordering);
  return out;
}

bool is_valid_matrix_json(const nlohmann::json& j, std::string* why) {
  auto fail = [why](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!j.is_object()) return fail("matrix JSON must be an object");
  for (const char* key : {"rows", "cols", "re", "im"}) {
    if (!j.contains(key)) return fail("missing required key");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    return fail("rows/cols must be integers");
  }
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows <= 0 || cols <= 0) return fail("rows/cols must be positive");
  for (const char* part : {"re", "im"}) {
    const auto& arr = j[part];
    if (!arr.is_array() || static_cast<long long>(arr.size()) != rows) return fail("row count mismatch");
    for (const auto& row : arr) {
      if (!row.is_array() || static_cast<long long>(row.size()) != cols) return fail("column count mismatch");
      for (const auto& v : row) {
        if (!v.is_number()) return fail("entries must be numbers");
        if (!std::isfinite(v.get<double>())) return fail("entries must be finite");
      }
    }
  }
  if (j.contains("basis_ordering") && !j["basis_ordering"].is_string()) {
    return fail("basis_ordering must be a string");
  }
  return true;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  std::string why;
  if (!is_valid_matrix_json(j, &why)) throw ParseError("invalid matrix JSON: " + why, 0);
  const auto rows = j["rows"].get<Eigen::Index>();
  const auto cols = j["cols"].get<Eigen::Index>();
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = Complex(j["re"][r][c].get<double>(), j["im"][r][c].get<double>());
    }
  }
  return m;
}

std::optional<std::string> basis_ordering_of(const nlohmann::json& j) {
  if (j.is_object() && j.contains("basis_ordering") && j["basis_ordering"].is_string()) {
    return j["basis_ordering"].get<std::string>();
  }
  return std::nullopt;
}

}  // namespace tbq
