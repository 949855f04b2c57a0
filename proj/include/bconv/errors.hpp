#pragma once

#include <stdexcept>
#include <string>

namespace bconv {

/// Bad user input: malformed files, invalid parameters, violated preconditions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation was refused because it would exceed a configured budget
/// (atom count, cell count, search memory).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical certification step could not separate the answer from a
/// boundary case (root on a circle, ambiguous isolation).
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bconv
