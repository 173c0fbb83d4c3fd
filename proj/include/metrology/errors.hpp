#ifndef METROLOGY_ERRORS_HPP
#define METROLOGY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace metrology {

/// Base class for all estimation-pipeline failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Symmetry-function derivative is non-finite somewhere on the requested range.
struct NonFiniteDerivative : Error {
    using Error::Error;
};

/// Likelihood annihilates the entire prior support; the update is undefined.
struct ZeroEvidence : Error {
    using Error::Error;
};

/// |f'| underflows at the estimate, so the error bar cannot be formed.
struct DegenerateDerivative : Error {
    using Error::Error;
};

/// Outcome sum could not reach the required probability coverage within the cap.
struct TruncationFailure : Error {
    using Error::Error;
};

/// Every likelihood value is zero; no maximizer exists.
struct AllZeroLikelihood : Error {
    using Error::Error;
};

/// A dark-corrected mean is <= 0; the log-ratio estimator is undefined.
struct NonPositiveMean : Error {
    using Error::Error;
};

/// Mean of the estimates is zero; noise-to-signal ratio is undefined.
struct ZeroMean : Error {
    using Error::Error;
};

/// Fewer than two usable repeats in a strategy group.
struct InsufficientRepeats : Error {
    using Error::Error;
};

/// Config file or override failed validation. Carries the offending field.
struct ConfigError : Error {
    std::string field;
    ConfigError(std::string field_name, const std::string& msg)
        : Error("config field '" + field_name + "': " + msg), field(std::move(field_name)) {}
};

/// Malformed row in a CSV input. Carries the 1-based row number.
struct CsvError : Error {
    long row;
    CsvError(long row_number, const std::string& msg)
        : Error("row " + std::to_string(row_number) + ": " + msg), row(row_number) {}
};

}  // namespace metrology

#endif
