#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wva {

enum class ErrorCode {
    invalid_dimension,
    invalid_state,
    out_of_regime,
    truncation,
    impossible_post_selection,
    undefined_weak_value,
    insufficient_data,
    oracle_scale,
    validation,
    parse,
    io,
};

/// Machine-readable snake_case name, used in the CLI's JSON error object.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace wva
