#pragma once

#include <stdexcept>
#include <string>

namespace qks {

enum class ErrorCode {
    Ok = 0,
    DegenerateParameters,
    BaseDegenerate,
    ZeroMode,
    NearSingularDenominator,
    ZeroSpectralParameter,
    InadmissibleRoots,
    PoleAtSpectralParameter,
    PoleHit,
    PathCollision,
    StepUnderflow,
    IncompleteSet,
    ResonantZ,
    TruncationDominates,
    InvalidArgument,
    IoError,
    CacheMismatch,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::DegenerateParameters: return "DegenerateParameters";
        case ErrorCode::BaseDegenerate: return "BaseDegenerate";
        case ErrorCode::ZeroMode: return "ZeroMode";
        case ErrorCode::NearSingularDenominator: return "NearSingularDenominator";
        case ErrorCode::ZeroSpectralParameter: return "ZeroSpectralParameter";
        case ErrorCode::InadmissibleRoots: return "InadmissibleRoots";
        case ErrorCode::PoleAtSpectralParameter: return "PoleAtSpectralParameter";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::PathCollision: return "PathCollision";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::IncompleteSet: return "IncompleteSet";
        case ErrorCode::ResonantZ: return "ResonantZ";
        case ErrorCode::TruncationDominates: return "TruncationDominates";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::CacheMismatch: return "CacheMismatch";
    }
    return "Unknown";
}

class QksError : public std::runtime_error {
  public:
    QksError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace qks
