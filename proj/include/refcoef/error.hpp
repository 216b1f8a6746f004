#pragma once

#include <stdexcept>
#include <string>

namespace refcoef {

/// Precondition violated by the caller (bad argument, point outside C+, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The numerics could not deliver a trustworthy value (pole hit, integrator
/// blow-up, too many non-converged boundary values).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data. `code` is the stable machine-readable
/// tag used by the command-line front end (E001, E002, E003, ...).
class InputError : public std::runtime_error {
public:
    InputError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace refcoef
