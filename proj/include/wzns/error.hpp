#pragma once

#include <stdexcept>
#include <string>

namespace wzns {

// Numeric values are part of the C API (see wzns.h) and must stay stable.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,
    invalid_truncation = 2,
    shell_truncated = 3,
    unknown_mode = 4,
    incomplete_ensemble = 5,
    refine_first = 6,
    grid_incompatible = 7,
    undefined_seminorm = 8,
    symmetry = 9,
    configuration = 10,
    time_range = 11,
    io = 12,
    unsupported_version = 13,
    unknown_key = 14,
    constraint = 15,
    validation_failed = 16,
    internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wzns
