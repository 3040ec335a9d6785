// Copyright 2026 The qantenna Authors
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

namespace qantenna {

enum class ErrorCode {
    NonPositiveFrequency,
    UltraStrongCoupling,
    NegativeLength,
    InvalidParameter,
    QuadratureNonConvergence,
    StepTooLarge,
    NonHermitianInitialState,
    SingularSystem,
    UnknownPreset,
    ConfigParseError,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::UltraStrongCoupling: return "UltraStrongCoupling";
    case ErrorCode::NegativeLength: return "NegativeLength";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonHermitianInitialState: return "NonHermitianInitialState";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    /// Numerical failures map to CLI exit code 2, everything else to 1.
    bool is_numerical() const noexcept
    {
        return code_ == ErrorCode::QuadratureNonConvergence || code_ == ErrorCode::StepTooLarge ||
               code_ == ErrorCode::SingularSystem;
    }

private:
    ErrorCode code_;
};

} // namespace qantenna
