#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anticyc {

/// Error kinds raised by the library. Kinds in the precision family map to
/// CLI exit code 2; everything else is a domain/validation error (exit 1).
enum class Errc {
    NonUnit,
    DomainError,
    ContextMismatch,
    NotRational,
    PrecisionLoss,
    PrecisionExhausted,
    TruncationError,
    NotPrimitive,
    NotDefinite,
    DiscMismatch,
    BoundExceeded,
    NotSplit,
    Ramified,
    ConductorMismatch,
    UnitObstruction,
    NotInGroup,
    OddExponent,
    BadPrime,
    NotStable,
    NoConvergence,
    BranchMismatch,
};

constexpr std::string_view errc_name(Errc e) noexcept {
    switch (e) {
        case Errc::NonUnit: return "NonUnit";
        case Errc::DomainError: return "DomainError";
        case Errc::ContextMismatch: return "ContextMismatch";
        case Errc::NotRational: return "NotRational";
        case Errc::PrecisionLoss: return "PrecisionLoss";
        case Errc::PrecisionExhausted: return "PrecisionExhausted";
        case Errc::TruncationError: return "TruncationError";
        case Errc::NotPrimitive: return "NotPrimitive";
        case Errc::NotDefinite: return "NotDefinite";
        case Errc::DiscMismatch: return "DiscMismatch";
        case Errc::BoundExceeded: return "BoundExceeded";
        case Errc::NotSplit: return "NotSplit";
        case Errc::Ramified: return "Ramified";
        case Errc::ConductorMismatch: return "ConductorMismatch";
        case Errc::UnitObstruction: return "UnitObstruction";
        case Errc::NotInGroup: return "NotInGroup";
        case Errc::OddExponent: return "OddExponent";
        case Errc::BadPrime: return "BadPrime";
        case Errc::NotStable: return "NotStable";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::BranchMismatch: return "BranchMismatch";
    }
    return "Unknown";
}

constexpr bool is_precision_error(Errc e) noexcept {
    return e == Errc::PrecisionLoss || e == Errc::PrecisionExhausted ||
           e == Errc::TruncationError || e == Errc::NotRational || e == Errc::NoConvergence;
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, long deficit = 0)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what),
          code_(code),
          deficit_(deficit) {}

    Errc code() const noexcept { return code_; }
    /// Missing precision (in the unit of the failing ring) for precision errors.
    long deficit() const noexcept { return deficit_; }
    bool precision_related() const noexcept { return is_precision_error(code_); }

private:
    Errc code_;
    long deficit_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what, long deficit = 0) {
    throw Error(code, what, deficit);
}

}  // namespace anticyc
