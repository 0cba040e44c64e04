#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ntgv {

enum class ErrorCode {
    NonManifoldEdge,
    InconsistentOrientation,
    DegenerateTriangle,
    InvalidIndex,
    AntipodalPoints,
    PointOutsideTriangle,
    CgNoConvergence,
    LineSearchFailure,
    SizeMismatch,
    ParseError,
    UnsupportedFormat,
    InvalidArgument,
};

inline const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::AntipodalPoints: return "AntipodalPoints";
    case ErrorCode::PointOutsideTriangle: return "PointOutsideTriangle";
    case ErrorCode::CgNoConvergence: return "CgNoConvergence";
    case ErrorCode::LineSearchFailure: return "LineSearchFailure";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Exception type thrown by every module of the library.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , m_code(code)
    {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

/// Sink for non-fatal diagnostics (obtuse-edge warnings, rejected line searches).
/// Defaults to stderr; replace it to silence or capture warnings.
inline std::function<void(std::string_view)>& warning_handler()
{
    static std::function<void(std::string_view)> handler = [](std::string_view msg) {
        std::cerr << "[ntgv warning] " << msg << '\n';
    };
    return handler;
}

inline void warn(std::string_view msg)
{
    if (auto& h = warning_handler()) h(msg);
}

} // namespace ntgv
