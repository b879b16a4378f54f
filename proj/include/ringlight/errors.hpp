#pragma once

#include <stdexcept>
#include <string>

namespace ringlight {

// Errors raised by the physics modules. Runner maps ConfigError to exit code 2
// and NumericError (and subclasses) to exit code 3.

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OverlapError : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct WrongGeometry : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct DimensionMismatch : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct OutOfWindow : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct SingularSeparation : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenSolverError : NumericError {
    using NumericError::NumericError;
};

struct IntegrationAccuracyError : NumericError {
    using NumericError::NumericError;
};

struct IllConditioned : NumericError {
    using NumericError::NumericError;
};

struct NoResonantMode : NumericError {
    using NumericError::NumericError;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ringlight
