#pragma once

#include <stdexcept>
#include <string>

namespace pdsq {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration (dimensions, ranges, flags).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameter combination for which no closed form is implemented.
class UnsupportedCase : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A closed-form result failed an internal self-check.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Norm escaped the retained Fock dimension beyond the accepted threshold.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double leakage, int dim)
        : std::runtime_error(what), leakage_(leakage), dim_(dim) {}

    double leakage() const noexcept { return leakage_; }
    int dim() const noexcept { return dim_; }

private:
    double leakage_;
    int dim_;
};

} // namespace pdsq
