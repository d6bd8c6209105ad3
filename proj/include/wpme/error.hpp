#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wpme {

enum class ErrorCode {
    InvalidArgument,
    DomainBoundary,
    NegativeExponent,
    DensityRejected,
    TimeOutOfDomain,
    OnBranchInterface,
    BracketNonpositive,
    StencilCrossesInterface,
    EmptyRegion,
    KBoundViolated,
    EpsilonTooLarge,
    NoFeasiblePoint,
    PeqMUnsupported,
    NewtonDivergence,
    InvalidDatum,
    MonotonicityViolation,
    WindowMismatch,
    ConfigInvalid,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainBoundary: return "DomainBoundary";
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::DensityRejected: return "DensityRejected";
    case ErrorCode::TimeOutOfDomain: return "TimeOutOfDomain";
    case ErrorCode::OnBranchInterface: return "OnBranchInterface";
    case ErrorCode::BracketNonpositive: return "BracketNonpositive";
    case ErrorCode::StencilCrossesInterface: return "StencilCrossesInterface";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::KBoundViolated: return "KBoundViolated";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::PeqMUnsupported: return "PeqMUnsupported";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::InvalidDatum: return "InvalidDatum";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

}  // namespace wpme
