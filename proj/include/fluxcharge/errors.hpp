#pragma once

#include <stdexcept>
#include <string>

namespace fluxcharge {

/// Failure classes surfaced by the library; the CLI maps them to exit codes.
enum class ErrorKind {
    parse,       ///< malformed input document (exit 2)
    validation,  ///< well-formed input violating a model rule (exit 2)
    unsupported, ///< structurally valid input outside the supported class (exit 3)
    check,       ///< a runtime invariant or numeric check failed (exit 1)
    internal,    ///< an internal consistency guarantee was violated (exit 1)
};

class CircuitError : public std::runtime_error {
public:
    CircuitError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const { return kind_; }

    [[nodiscard]] int exit_code() const {
        switch (kind_) {
            case ErrorKind::parse:
            case ErrorKind::validation: return 2;
            case ErrorKind::unsupported: return 3;
            case ErrorKind::check:
            case ErrorKind::internal: return 1;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

} // namespace fluxcharge
