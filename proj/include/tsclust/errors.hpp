#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsclust {

/// Input data violates a structural invariant. Carries every violation found,
/// not just the first one.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// An algorithm parameter is out of its admissible range (negative gamma, k > n, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The input is valid data but the requested quantity is undefined for it
/// (e.g. normalized cross-correlation against an all-zero series).
class DegenerateInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace tsclust
