#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorenzctl {

enum class ErrorCode {
    InvalidArgument,
    DegenerateB,
    DegenerateParams,
    UnsupportedPreset,
    NotASaddle,
    EigenvalueCollision,
    NotStableRegime,
    DivergedTrajectory,
    LengthMismatch,
    IoError,
    UnsupportedFormat,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateB: return "DegenerateB";
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::UnsupportedPreset: return "UnsupportedPreset";
    case ErrorCode::NotASaddle: return "NotASaddle";
    case ErrorCode::EigenvalueCollision: return "EigenvalueCollision";
    case ErrorCode::NotStableRegime: return "NotStableRegime";
    case ErrorCode::DivergedTrajectory: return "DivergedTrajectory";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace lorenzctl
