#pragma once

#include <stdexcept>
#include <string>

namespace lqd {

enum class ErrorKind {
    domain,
    pole_hit,
    degenerate,
    no_convergence,
    branch,
    step_too_large,
    collision,
    invalid_direction,
    startup_too_coarse,
    corner_at_singularity,
    non_real,
    self_intersection,
    boundary_exit,
    empty_overlap,
    parse,
};

const char *to_string(ErrorKind kind);

// Single exception type for the library; the kind drives the C error codes.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &what);

} // namespace lqd
