#pragma once

#include <stdexcept>
#include <string>

namespace sentfact {

// Base class for all failures thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed Penman text; the message names the byte offset.
class ParseError : public Error {
public:
    using Error::Error;
};

// A variable re-reference that cannot be resolved to a defining node.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Malformed records, paths, or file blocks.
class FormatError : public Error {
public:
    using Error::Error;
};

// Unreadable or inconsistent resource files.
class LoadError : public Error {
public:
    using Error::Error;
};

class FileNotFoundError : public LoadError {
public:
    using LoadError::LoadError;
};

// Nothing left to work with after filtering (empty alignment, all-OOV input).
class EmptyInputError : public Error {
public:
    using Error::Error;
};

// A branching-factor or size bound was exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Scaling overflowed or produced non-finite values.
class NumericError : public Error {
public:
    using Error::Error;
};

// A statistic is undefined for the given input (zero variance, zero vector).
class UndefinedValueError : public Error {
public:
    using Error::Error;
};

// Dataset-level evaluation failures.
class EvalError : public Error {
public:
    using Error::Error;
};

} // namespace sentfact
