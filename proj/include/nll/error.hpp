// Copyright 2026 The nll Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception type shared by every module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nll {

enum class ErrorCode {
    NotHermitian,
    DimMismatch,
    ZeroState,
    BasisNotOrthonormal,
    NotUnitary,
    NotInvolution,
    NonrealExpectation,
    NotCommuting,
    NonlinearFunctional,
    BadIndices,
    NoKeptTrials,
    NegativeTime,
    NodeRegion,
    StepTooLarge,
    BadInput,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::BasisNotOrthonormal: return "BasisNotOrthonormal";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::NonrealExpectation: return "NonrealExpectation";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NonlinearFunctional: return "NonlinearFunctional";
    case ErrorCode::BadIndices: return "BadIndices";
    case ErrorCode::NoKeptTrials: return "NoKeptTrials";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::NodeRegion: return "NodeRegion";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
    throw Error(code, what);
}

} // namespace nll
