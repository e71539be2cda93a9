#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schottky {

/// Failure categories raised by the library.
enum class ErrorKind {
    ParabolicOrEllipticMap,
    IndexOutOfRange,
    NotReduced,
    CoincidentFixedPoints,
    NotLoxodromic,
    CirclesOverlap,
    InvalidGraph,
    InvalidParams,
    InvalidScale,
    InvalidInput,
    PoleProximity,
    TruncationNotConverged,
    PoleOnContour,
    PathBlocked,
    FourierNotConverged,
    DegenerateCrossRatio,
    RiemannRelationViolated,
    LatticeNotConverged,
    ThetaZero,
    RatioPoleOnCircle,
    TruncationTooShallow,
    HalfIntegerCharacteristic,
    GenericCharacteristic,
    TauZeroOnGrid,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace schottky
