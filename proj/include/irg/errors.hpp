#pragma once

#include <stdexcept>
#include <string>

namespace irg {

// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// graph construction
class OutOfRangeVertex : public Error {
public:
    using Error::Error;
};
class SelfLoop : public Error {
public:
    using Error::Error;
};

// kernels
class ValueOutOfRange : public Error {
public:
    using Error::Error;
};
class AsymmetricBlockMatrix : public Error {
public:
    using Error::Error;
};
class ProbabilityExceedsOne : public Error {
public:
    using Error::Error;
};
class EmptyRegion : public Error {
public:
    using Error::Error;
};

// predictors
class DomainError : public Error {
public:
    using Error::Error;
};
class DegenerateProduct : public Error {
public:
    using Error::Error;
};
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

// experiments / CLI
class ConfigError : public Error {
public:
    using Error::Error;
};
class IoError : public Error {
public:
    using Error::Error;
};
class BudgetExceededFractionTooHigh : public Error {
public:
    using Error::Error;
};

} // namespace irg
