#include "nikodym/error.hpp"

namespace nikodym {

const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::InvalidField: return "InvalidField";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::SubfieldRequired: return "SubfieldRequired";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SamplingFailure: return "SamplingFailure";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::PrecondViolation: return "PrecondViolation";
    case Errc::ParamError: return "ParamError";
    case Errc::NotFound: return "NotFound";
    case Errc::InvalidParabolaField: return "InvalidParabolaField";
    case Errc::WitnessError: return "WitnessError";
    case Errc::NotNikodym: return "NotNikodym";
    case Errc::CharTooSmall: return "CharTooSmall";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
{
}

} // namespace nikodym
