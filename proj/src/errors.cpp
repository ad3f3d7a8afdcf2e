#include "lqd/errors.hpp"

namespace lqd {

const char *to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole_hit: return "pole_hit";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::no_convergence: return "no_convergence";
    case ErrorKind::branch: return "branch";
    case ErrorKind::step_too_large: return "step_too_large";
    case ErrorKind::collision: return "collision";
    case ErrorKind::invalid_direction: return "invalid_direction";
    case ErrorKind::startup_too_coarse: return "startup_too_coarse";
    case ErrorKind::corner_at_singularity: return "corner_at_singularity";
    case ErrorKind::non_real: return "non_real";
    case ErrorKind::self_intersection: return "self_intersection";
    case ErrorKind::boundary_exit: return "boundary_exit";
    case ErrorKind::empty_overlap: return "empty_overlap";
    case ErrorKind::parse: return "parse";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string &what)
{
    throw Error(kind, what);
}

} // namespace lqd
