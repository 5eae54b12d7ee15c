#pragma once

#include <stdexcept>
#include <string>

namespace psilingam {

/// Invalid or malformed input data (bad files, broken invariants).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (singular systems, degenerate statistics).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace psilingam
