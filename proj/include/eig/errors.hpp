#pragma once

#include <stdexcept>
#include <string>

namespace eig {

// Bad input: config file problems, invariant violations at construction.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: quadrature non-convergence, window too narrow/coarse.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace eig
