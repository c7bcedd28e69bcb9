#pragma once

#include <stdexcept>
#include <string>

namespace ferdisc {

// Bad user input or violated precondition. CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative routine hit its iteration cap. CLI maps this to exit code 3.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ferdisc
