// Copyright 2026 The statlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
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
#include <utility>

namespace statlab {

// Every failure the engine can report. The string form is part of the API
// contract (ApiError.code) and must stay stable.
enum class ErrorCode {
  kDomain,
  kSingularity,
  kBracketFailure,
  kInvalidParameter,
  kUnknownDistribution,
  kUnknownSetting,
  kIntervalOrder,
  kTooFewObservations,
  kNonBinaryData,
  kDegenerateVariance,
  kIncompatibleSample,
  kLengthMismatch,
  kDegenerateX,
  kNonFiniteValue,
  kDegenerateFit,
  kParseError,
  kInvalidJson,
  kSchemaViolation,
  kPayloadTooLarge,
  kNotFound,
  kMethodNotAllowed,
  kInternal,
};

inline constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kSingularity: return "singularity";
    case ErrorCode::kBracketFailure: return "bracket_failure";
    case ErrorCode::kInvalidParameter: return "invalid_parameter";
    case ErrorCode::kUnknownDistribution: return "unknown_distribution";
    case ErrorCode::kUnknownSetting: return "unknown_setting";
    case ErrorCode::kIntervalOrder: return "interval_order";
    case ErrorCode::kTooFewObservations: return "too_few_observations";
    case ErrorCode::kNonBinaryData: return "non_binary_data";
    case ErrorCode::kDegenerateVariance: return "degenerate_variance";
    case ErrorCode::kIncompatibleSample: return "incompatible_sample";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kDegenerateX: return "degenerate_x";
    case ErrorCode::kNonFiniteValue: return "non_finite_value";
    case ErrorCode::kDegenerateFit: return "degenerate_fit";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kInvalidJson: return "invalid_json";
    case ErrorCode::kSchemaViolation: return "schema_violation";
    case ErrorCode::kPayloadTooLarge: return "payload_too_large";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kMethodNotAllowed: return "method_not_allowed";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "internal_error";
}

/// Engine error carrying a stable code and, when known, the path of the
/// offending input (e.g. "params.p" or "samples[1].n").
class StatError : public std::runtime_error {
 public:
  StatError(ErrorCode code, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)),
        code_(code),
        field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message,
                              std::string field = {}) {
  throw StatError(code, std::move(message), std::move(field));
}

}  // namespace statlab
