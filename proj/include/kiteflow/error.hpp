#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kiteflow
{

enum class ErrorKind {
    NonBipartite,
    NotStronglyRegular,
    DanglingEdge,
    AngleOutOfRange,
    ParseError,
    IOError,
    DomainError,
    BranchCut,
    MissingRadius,
    NoConvergence,
    NotASolution,
    DomainViolation,
    CombinatoricsMismatch,
    AngleMismatch,
    NotEmbedded,
    OutsideDomain,
    DegenerateTriangle,
    SingularSystem,
    NoPath,
    TooLarge,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonBipartite: return "NonBipartite";
    case ErrorKind::NotStronglyRegular: return "NotStronglyRegular";
    case ErrorKind::DanglingEdge: return "DanglingEdge";
    case ErrorKind::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IOError: return "IOError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BranchCut: return "BranchCut";
    case ErrorKind::MissingRadius: return "MissingRadius";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::CombinatoricsMismatch: return "CombinatoricsMismatch";
    case ErrorKind::AngleMismatch: return "AngleMismatch";
    case ErrorKind::NotEmbedded: return "NotEmbedded";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/** @brief Library exception carrying a machine-readable kind */
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_{kind}
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace kiteflow
