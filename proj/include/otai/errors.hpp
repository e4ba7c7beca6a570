#pragma once

#include <stdexcept>
#include <string>

namespace otai {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument value (bad dimension, nonpositive std, empty list, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Matrix/vector shape mismatch.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of a closed-form bound.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge.
class ComputationError : public Error {
public:
    using Error::Error;
};

/// A Monte-Carlo estimate could not be formed (e.g. no usable draws).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// File input/output failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace otai
