#pragma once

#include <stdexcept>
#include <string>

namespace qc {

/// Bad input / violated precondition: CLI maps these to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure with diagnostics: CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::string diagnostics = "")
        : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const { return diagnostics_; }

private:
    std::string diagnostics_;
};

class OutOfMeshRange : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TrackingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SliceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BoxExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qc
