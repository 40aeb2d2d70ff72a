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

#ifndef TBQ_MATRIX_JSON_HPP
#define TBQ_MATRIX_JSON_HPP

// Repo-wide matrix interchange format:
//   {"rows": n, "cols": m, "re": [[...], ...], "im": [[...], ...]}
// row-major, with an optional "basis_ordering" string for rho and chi files.

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tbq/qcore.hpp"

namespace tbq {

inline constexpr int kOutputSignificantDigits = 12;

/// Rounds to a fixed number of significant digits so emitted numbers are
/// reproducible byte-for-byte. Negative zero becomes zero.
double round_significant(double x, int digits = kOutputSignificantDigits);

nlohmann::json matrix_to_json(const ComplexMatrix& m, std::string_view basis_ordering = {});

/// Parses and validates; throws ParseError on schema violations.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Schema check without throwing. On failure *why names the problem.
bool is_valid_matrix_json(const nlohmann::json& j, std::string* why = nullptr);

std::optional<std::string> basis_ordering_of(const nlohmann::json& j);

}  // namespace tbq

#endif  // TBQ_MATRIX_JSON_HPP
