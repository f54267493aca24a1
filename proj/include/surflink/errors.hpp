#pragma once

#include <stdexcept>
#include <string>

namespace surflink {

// Bad user-facing configuration (file contents, CLI values).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation would exceed its memory budget; carries the required size.
struct budget_error : std::runtime_error {
    budget_error(const std::string& msg, std::size_t required, std::size_t budget)
        : std::runtime_error(msg), required_entries(required), budget_entries(budget) {}
    std::size_t required_entries;
    std::size_t budget_entries;
};

// Adaptive integration (or the SVD) failed to reach the requested tolerance.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}
