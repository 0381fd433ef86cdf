#pragma once

#include <stdexcept>
#include <string>

namespace imbtext {

// Base for all library errors. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files (bad JSON, wrong shapes). Messages carry line numbers.
class ParseError : public Error {
public:
    using Error::Error;
};

// Inputs that parse but violate a contract (duplicate ids, zero counts, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration; message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace imbtext
