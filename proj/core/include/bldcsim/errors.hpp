#pragma once

#include <stdexcept>

namespace bldcsim {

// Error taxonomy shared across the library. The CLI maps configuration and
// usage faults to exit status 2 and numerical faults to exit status 3.

struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyProfile : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidHallCode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShootThrough : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewRows : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingColumn : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bldcsim
