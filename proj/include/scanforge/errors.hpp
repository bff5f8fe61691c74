#pragma once

#include <stdexcept>
#include <string>

namespace scanforge {

// Base of all domain errors. The CLI maps these to exit code 2;
// command-line usage problems exit with 1 instead.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error("parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}

    int line;
    int column;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& field, const std::string& entity,
                    const std::string& detail)
        : Error("invalid field '" + field + "' on '" + entity + "': " + detail),
          field(field),
          entity(entity) {}

    std::string field;
    std::string entity;
};

class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class RoomTooSmall : public Error {
public:
    using Error::Error;
};

class NoPath : public Error {
public:
    using Error::Error;
};

class InsufficientPaths : public Error {
public:
    using Error::Error;
};

class ReferenceNotVisible : public Error {
public:
    using Error::Error;
};

class InvalidQuery : public Error {
public:
    using Error::Error;
};

class UnclassifiedQuestion : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace scanforge
