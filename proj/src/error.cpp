#include "wzns/error.hpp"

namespace wzns {

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_truncation: return "invalid_truncation";
    case ErrorCode::shell_truncated: return "shell_truncated";
    case ErrorCode::unknown_mode: return "unknown_mode";
    case ErrorCode::incomplete_ensemble: return "incomplete_ensemble";
    case ErrorCode::refine_first: return "refine_first";
    case ErrorCode::grid_incompatible: return "grid_incompatible";
    case ErrorCode::undefined_seminorm: return "undefined_seminorm";
    case ErrorCode::symmetry: return "symmetry";
    case ErrorCode::configuration: return "configuration";
    case ErrorCode::time_range: return "time_range";
    case ErrorCode::io: return "io";
    case ErrorCode::unsupported_version: return "unsupported_version";
    case ErrorCode::unknown_key: return "unknown_key";
    case ErrorCode::constraint: return "constraint";
    case ErrorCode::validation_failed: return "validation_failed";
    case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

}  // namespace wzns
