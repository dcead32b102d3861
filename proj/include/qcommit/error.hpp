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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcommit {

enum class Errc {
  ZeroVector,
  DimMismatch,
  NoConvergence,
  DomainError,
  IncompleteMeasurement,
  LengthMismatch,
  TooLarge,
  Unbounded,
  PackingFailure,
  IndexOutOfRange,
  DuplicateTargets,
  InvalidCodebook,
  UnknownStrategy,
  ProtocolViolation,
  DeserializeError,
  InvalidSpec,
  IOError,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DomainError: return "DomainError";
    case Errc::IncompleteMeasurement: return "IncompleteMeasurement";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Unbounded: return "Unbounded";
    case Errc::PackingFailure: return "PackingFailure";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DuplicateTargets: return "DuplicateTargets";
    case Errc::InvalidCodebook: return "InvalidCodebook";
    case Errc::UnknownStrategy: return "UnknownStrategy";
    case Errc::ProtocolViolation: return "ProtocolViolation";
    case Errc::DeserializeError: return "DeserializeError";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::IOError: return "IOError";
  }
  return "Unknown";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qcommit
