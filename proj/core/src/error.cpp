#include "schottky/error.hpp"

namespace schottky {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::ParabolicOrEllipticMap: return "ParabolicOrEllipticMap";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotReduced: return "NotReduced";
    case ErrorKind::CoincidentFixedPoints: return "CoincidentFixedPoints";
    case ErrorKind::NotLoxodromic: return "NotLoxodromic";
    case ErrorKind::CirclesOverlap: return "CirclesOverlap";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorKind::PoleOnContour: return "PoleOnContour";
    case ErrorKind::PathBlocked: return "PathBlocked";
    case ErrorKind::FourierNotConverged: return "FourierNotConverged";
    case ErrorKind::DegenerateCrossRatio: return "DegenerateCrossRatio";
    case ErrorKind::RiemannRelationViolated: return "RiemannRelationViolated";
    case ErrorKind::LatticeNotConverged: return "LatticeNotConverged";
    case ErrorKind::ThetaZero: return "ThetaZero";
    case ErrorKind::RatioPoleOnCircle: return "RatioPoleOnCircle";
    case ErrorKind::TruncationTooShallow: return "TruncationTooShallow";
    case ErrorKind::HalfIntegerCharacteristic: return "HalfIntegerCharacteristic";
    case ErrorKind::GenericCharacteristic: return "GenericCharacteristic";
    case ErrorKind::TauZeroOnGrid: return "TauZeroOnGrid";
    }
    return "Unknown";
}

} // namespace schottky
