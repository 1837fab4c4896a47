#pragma once
#include <stdexcept>
#include <string>

namespace qwalk {

// Input rejected before any analysis ran.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical machinery failed to certify its own result.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qwalk
