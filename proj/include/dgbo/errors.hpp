#pragma once

#include <stdexcept>
#include <string>

namespace dgbo {

enum class ErrorKind {
    Grid,
    SingularSymbol,
    Admissibility,
    Domain,
    Region,
    Hypothesis,
    NotReal,
    Resolution,
    Config,
    Instability,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Bad input. The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Failure while computing (blow-up, I/O). Exit code 1.
class RuntimeFailure : public Error {
public:
    using Error::Error;
};

[[noreturn]] inline void fail_validation(ErrorKind kind, const std::string& what) {
    throw ValidationError(kind, what);
}

}  // namespace dgbo
