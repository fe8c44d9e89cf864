#pragma once

#include <stdexcept>
#include <string>

namespace morselab {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// A documented precondition of an operation does not hold for its input
// (e.g. tracing a null direction from a nondegenerate point).
class PreconditionError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Non-finite values produced while evaluating a function.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace morselab
