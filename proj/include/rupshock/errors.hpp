#pragma once

#include <stdexcept>
#include <string>

namespace rupshock {

// Every failure mode the library reports, by name. Callers that care about
// the *kind* of failure branch on the code; the message carries the details.
enum class errc {
    empty_urn,              // sampling an urn with zero total count
    invalid_matrix,         // a replacement row would drive a count below zero
    grid_exhausted,         // white drawn at the top grid state
    malformed_path,         // a path that no process realization could produce
    unknown_state,          // an observation or index outside the grid
    no_failure_within_cap,  // simulation hit its step cap before a failure
    below_grid,             // observed value below the smallest grid state
    off_grid,               // observed value above the largest grid state
    parse_error,            // malformed input file
    bad_config,             // invalid parameters (non-positive s, bad priors, ...)
};

constexpr const char* errc_name(errc c) {
    switch (c) {
        case errc::empty_urn: return "empty-urn";
        case errc::invalid_matrix: return "invalid-matrix";
        case errc::grid_exhausted: return "grid-exhausted";
        case errc::malformed_path: return "malformed-path";
        case errc::unknown_state: return "unknown-state";
        case errc::no_failure_within_cap: return "no-failure-within-cap";
        case errc::below_grid: return "below-grid";
        case errc::off_grid: return "off-grid";
        case errc::parse_error: return "parse-error";
        case errc::bad_config: return "bad-config";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw error(code, what);
}

}  // namespace rupshock
