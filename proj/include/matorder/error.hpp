#pragma once

#include <stdexcept>
#include <string>

namespace matorder {

enum class ErrorKind {
    InvalidInput,
    NumericalDomain,
    DegenerateBase,
    SupportViolation,
    NonConvergence,
    OracleUnstable,
    ParseError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NumericalDomain: return "NumericalDomain";
        case ErrorKind::DegenerateBase: return "DegenerateBase";
        case ErrorKind::SupportViolation: return "SupportViolation";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::OracleUnstable: return "OracleUnstable";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace matorder
