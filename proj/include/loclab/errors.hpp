#pragma once

#include <stdexcept>
#include <string>

namespace loclab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class InvalidOutcome : public Error {
public:
    using Error::Error;
};

/// The update rule u(s, m) is a partial function; it is undefined when the
/// outcome has (numerically) zero probability.
class ZeroProbabilityUpdate : public Error {
public:
    explicit ZeroProbabilityUpdate(double probability)
        : Error("update undefined: outcome probability " + std::to_string(probability) +
                " is below the zero-probability threshold"),
          probability_(probability) {}

    double probability() const noexcept { return probability_; }

private:
    double probability_;
};

class TheoryMismatch : public Error {
public:
    using Error::Error;
};

class NotIsometry : public Error {
public:
    using Error::Error;
};

class NotTracePreserving : public Error {
public:
    using Error::Error;
};

class UnknownName : public Error {
public:
    using Error::Error;
};

class NotIndistinguishable : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace loclab
