#pragma once

#include <stdexcept>
#include <string>

namespace kron {

enum class ErrorCode {
    RankDeficientZ,
    NotSkew,
    SingularJ,
    VariableKindClash,
    UnknownVariable,
    MissingAssignment,
    ContextMismatch,
    NegativeConstant,
    NotInFamily,
    InfeasibleRegime,
    NoConvergence,
    NotLinear,
    BudgetExceeded,
    MissingDomain,
    StepTooLarge,
    ParseError,
    BadDocument,
};

/// All preconditions in the library fail with this exception; code() names
/// the violated contract so callers can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::RankDeficientZ: return "RankDeficientZ";
        case ErrorCode::NotSkew: return "NotSkew";
        case ErrorCode::SingularJ: return "SingularJ";
        case ErrorCode::VariableKindClash: return "VariableKindClash";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::MissingAssignment: return "MissingAssignment";
        case ErrorCode::ContextMismatch: return "ContextMismatch";
        case ErrorCode::NegativeConstant: return "NegativeConstant";
        case ErrorCode::NotInFamily: return "NotInFamily";
        case ErrorCode::InfeasibleRegime: return "InfeasibleRegime";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotLinear: return "NotLinear";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::MissingDomain: return "MissingDomain";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::BadDocument: return "BadDocument";
    }
    return "Unknown";
}

}  // namespace kron
