#pragma once

#include <stdexcept>
#include <string>

namespace kissing {

// exhaustive search refused because it would exceed the configured budget
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// an internal consistency check failed; indicates a bug or corrupt data,
// never a user error
struct integrity_error : std::logic_error {
    explicit integrity_error(const std::string& what) : std::logic_error(what) {}
};

// a named data asset could not be located or parsed
struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kissing
