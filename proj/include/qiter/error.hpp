// Copyright 2026 The qiter Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qiter {

enum class ErrorCode {
    ZeroRow,
    ZeroColumn,
    DimensionMismatch,
    InvalidIndex,
    InvalidQubit,
    NotUnitNorm,
    BadConvexWeights,
    PatternLengthMismatch,
    AmplitudeCapExceeded,
    Unsupported,
    Parse,
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroRow: return "ZeroRow";
        case ErrorCode::ZeroColumn: return "ZeroColumn";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidIndex: return "InvalidIndex";
        case ErrorCode::InvalidQubit: return "InvalidQubit";
        case ErrorCode::NotUnitNorm: return "NotUnitNorm";
        case ErrorCode::BadConvexWeights: return "BadConvexWeights";
        case ErrorCode::PatternLengthMismatch: return "PatternLengthMismatch";
        case ErrorCode::AmplitudeCapExceeded: return "AmplitudeCapExceeded";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace qiter
