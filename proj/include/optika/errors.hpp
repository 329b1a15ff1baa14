#pragma once

#include <stdexcept>
#include <string>

namespace optika {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structural problem in an input: unknown id, duplicate atom, missing table entry.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Two inputs that must share a category (or endpoints) do not.
class MismatchError : public Error {
public:
    using Error::Error;
};

// A construction that must always succeed did not. Signals a bug in the kernel.
class KernelError : public Error {
public:
    using Error::Error;
};

// Malformed JSON input. `where` carries the file and byte offset or JSON path.
class ParseError : public Error {
public:
    ParseError(std::string where, const std::string& what)
        : Error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace optika
