#include "wva/error.hpp"

namespace wva {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_dimension: return "invalid_dimension";
    case ErrorCode::invalid_state: return "invalid_state";
    case ErrorCode::out_of_regime: return "out_of_regime";
    case ErrorCode::truncation: return "truncation";
    case ErrorCode::impossible_post_selection: return "impossible_post_selection";
    case ErrorCode::undefined_weak_value: return "undefined_weak_value";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::oracle_scale: return "oracle_scale";
    case ErrorCode::validation: return "validation";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

} // namespace wva
