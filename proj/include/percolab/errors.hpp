#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

// Invalid experiment configuration (CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// An estimate could not be resolved within its budget (CLI exit code 3).
struct unresolved_error : std::runtime_error {
    explicit unresolved_error(const std::string& what) : std::runtime_error(what) {}
};

// A soundness cross-check failed; this falsifies the implementation, not the
// inputs (CLI exit code 4).
struct soundness_error : std::runtime_error {
    explicit soundness_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace percolab
