#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpsyn {

enum class ErrorKind {
    ParseError,
    DivisionByZero,
    ShapeMismatch,
    FieldMismatch,
    ValuationUnavailable,
    InvalidModule,
    UnsupportedModule,
    NotConvenient,
    PolynomialVanishes,
    PreconditionFailed,
    DegreeOutOfRange,
    InvalidDatum,
    DatumMismatch,
    ComparisonNotIso,
    TopCohomologyNotALine,
    ObstructionNonzero,
    AssumptionViolated,
    OperatorNotInvertible,
    NoSuchFactorization,
    InternalInconsistency,
};

std::string_view to_string(ErrorKind kind);

/// All failures raised by the library carry a kind so front ends can map them
/// onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace fpsyn
