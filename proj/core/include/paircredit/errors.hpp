#pragma once

#include <stdexcept>
#include <string>

namespace paircredit {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input lies outside the domain of the model or formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A contract whose fee leg vanishes, so no spread can be quoted.
class DegenerateContract : public Error {
public:
    using Error::Error;
};

/// Base for failures of the numerical machinery on otherwise valid input.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The raw value is not representable in double precision; use the log-scale routine.
class OverflowSignal : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SeriesNoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoRoot : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace detail {
[[noreturn]] void throw_domain(const std::string& what);
inline void require(bool condition, const char* what) {
    if (!condition) throw_domain(what);
}
}  // namespace detail

}  // namespace paircredit
