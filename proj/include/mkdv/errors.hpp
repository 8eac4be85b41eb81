#pragma once

#include <stdexcept>
#include <string>

namespace mkdv {

// Violated input contract: bad parameters, wrong layout, unmet hypothesis.
// The CLI maps this family to exit code 1.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParameterError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class LayoutError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class ShapeError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class DomainError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class DegenerateResonanceError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class RealityError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class RangeError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class ConfigError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class EmptyRecordError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Numerical failure: divergence, insufficient resolution, blow-up.
// The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mkdv
