#pragma once

#include <stdexcept>
#include <string>

namespace nikodym {

enum class Errc {
    InvalidField,
    CapacityExceeded,
    DivisionByZero,
    SubfieldRequired,
    ZeroVector,
    FieldMismatch,
    DimensionMismatch,
    SamplingFailure,
    NotNormalized,
    PrecondViolation,
    ParamError,
    NotFound,
    InvalidParabolaField,
    WitnessError,
    NotNikodym,
    CharTooSmall,
    CorruptFile,
    IoError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace nikodym
