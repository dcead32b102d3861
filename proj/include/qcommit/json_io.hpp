// Copyright 2026 The qcommit Authors
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

// Deterministic JSON / CSV number rendering. Doubles are written with 17
// significant digits via std::to_chars, which is locale-independent.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include <json.hpp>

#include "qcommit/error.hpp"

namespace qcommit {

using json = nlohmann::json;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw Error(Errc::IOError, "double formatting failed");
  return std::string(buf, res.ptr);
}

namespace detail {

inline void dump_into(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        out += json(it.key()).dump();
        out.push_back(':');
        dump_into(it.value(), out);
      }
      out.push_back('}');
      break;
    }
    case json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& v : j) {
        if (!first) out.push_back(',');
        first = false;
        dump_into(v, out);
      }
      out.push_back(']');
      break;
    }
    case json::value_t::number_float: {
      double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
      } else {
        std::string s = format_double(x);
        // keep floats recognizable as floats on read-back
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        out += s;
      }
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Compact single-line JSON with 17-significant-digit floats. Object keys
/// come out sorted (nlohmann::json's default map ordering).
inline std::string dump_json(const json& j) {
  std::string out;
  detail::dump_into(j, out);
  return out;
}

}  // namespace qcommit
