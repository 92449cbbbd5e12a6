#pragma once
#include <stdexcept>

namespace smscma {

// Invalid configuration values or malformed input file contents.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A decoder refused to run because its search space exceeds the configured guard.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unreadable path, write error).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace smscma
