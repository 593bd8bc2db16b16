#ifndef FXYZ_ERRORS_HPP
#define FXYZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fxyz {

// Invalid or inconsistent input values (bad eta fraction, guard violations, ...).
struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Evaluation at (or too close to) a zero of a theta denominator.
struct singular_error : std::domain_error {
    explicit singular_error(const std::string& msg) : std::domain_error(msg) {}
};

// Iteration caps exceeded, defective matrices, failed internal consistency.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fxyz

#endif
