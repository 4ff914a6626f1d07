#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aprep {

enum class ErrorKind {
    kInvalidArgument,  // caller supplied an out-of-contract value
    kData,             // malformed input text or records
    kInternal,         // an invariant that should hold by construction was violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string &what) : Error(ErrorKind::kInvalidArgument, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string &what) : Error(ErrorKind::kData, what) {}
};

class InternalError : public Error {
public:
    explicit InternalError(const std::string &what) : Error(ErrorKind::kInternal, what) {}
};

/// Syntax or resolution error in circuit text. Line and column are 1-based.
class ParseError : public DataError {
public:
    ParseError(size_t line, size_t column, const std::string &message)
        : DataError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column),
          message_(message) {}
    size_t line() const noexcept { return line_; }
    size_t column() const noexcept { return column_; }
    const std::string &message() const noexcept { return message_; }

private:
    size_t line_;
    size_t column_;
    std::string message_;
};

}  // namespace aprep
