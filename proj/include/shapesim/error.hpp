#pragma once

#include <stdexcept>
#include <string>

namespace shapesim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidRingError : public Error {
public:
    using Error::Error;
};

class DegenerateShapeError : public Error {
public:
    using Error::Error;
};

/// The boolean sweep produced an inconsistent result (negative delta area).
class GeometryRobustnessError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidAssignmentError : public Error {
public:
    using Error::Error;
};

class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DuplicateNameError : public Error {
public:
    using Error::Error;
};

}  // namespace shapesim
