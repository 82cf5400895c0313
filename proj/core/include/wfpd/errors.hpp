#pragma once

#include <stdexcept>
#include <string>

namespace wfpd {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter combination outside the model's validity region.
struct InvalidParams : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Population size too small for the pre-limit maps to define a
/// probability vector.
struct InvalidPopulationSize : Error {
    using Error::Error;
};

/// Floating-point state violated a tolerance that separates rounding
/// noise from logic errors.
struct NumericalError : Error {
    using Error::Error;
};

/// Not enough samples or data points for the requested statistic.
struct InsufficientData : Error {
    using Error::Error;
};

/// An iterative sampler failed to reach its target within its budget.
struct NonTermination : Error {
    using Error::Error;
};

}  // namespace wfpd
