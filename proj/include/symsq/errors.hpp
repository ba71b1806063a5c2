#pragma once

#include <stdexcept>
#include <string>

namespace symsq {

// Bad arguments to an operation (wrong prime, impossible conductor, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input record.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested regime is outside what the closed forms cover.
class UnsupportedRegime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A brute-force sum would exceed the configured size cap.
class OracleLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Something that existence theorems guarantee was not found.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace symsq
