#pragma once

#include <stdexcept>
#include <string>

namespace growth {

enum class ErrorKind {
    malformed_header,
    bad_number,
    non_positive_gdp,
    duplicate_year,
    duplicate_region,
    inverted_window,
    too_few_points,
    zero_span,
    no_singularity,
    at_or_beyond_singularity,
    empty_regime,
    insufficient_side,
    empty_window,
    unknown_region,
    io_failure,
    empty_spec,
    non_positive_on_log_scale,
};

/// Single exception type for the whole library; `kind()` identifies the
/// failure so callers and tests can dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace growth
