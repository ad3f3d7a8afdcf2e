#pragma once

#include "lqd/chordal.hpp"
#include "lqd/lattice.hpp"
#include "lqd/multislit.hpp"
#include "lqd/oracle.hpp"
#include "lqd/radial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lqd {

enum class Command { trace, multi, radial, oracle, check };

const char *to_string(Command command);
Command command_from_string(const std::string &name);

struct Job {
    FactorizedQD qd;
    TraceConfig config;

    // trace / oracle / check
    LaunchSpec start;
    std::vector<PathSegment> segments;
    // Vertices of the path when it is known as a polyline (lattice or explicit vertices).
    std::optional<Polyline> polyline;
    int n_subdiv = 256;
    double check_tolerance = 1e-3;

    // multi
    std::vector<SlitStart> slits;
    std::vector<double> weights;
    double multi_capacity = 0;

    // radial
    RadialLaunch radial;
    StopCriterion radial_stop{StopCriterion::Kind::capacity, 0};
    RadialMode radial_mode = RadialMode::origin_mark;
};

// Throws Error(parse) on malformed JSON or missing fields, Error(domain) on bad values.
Job parse_job(const std::string &text);
Job load_job(const std::string &path);

FactorizedQD parse_qd_json(const std::string &text);
std::string qd_to_json(const FactorizedQD &qd);

struct RunOutput {
    Command command = Command::trace;
    TraceResult trace;
    // check: the oracle run next to the chordal one
    TraceResult oracle;
    double deviation = 0;
    bool passed = true;
    MultiTraceResult multi;
    RadialTraceResult radial;
    std::optional<Polyline> polyline;
};

RunOutput run_job(const Job &job, Command command);

// Name of the stop reason that ended the run.
std::string stop_reason_of(const RunOutput &out);
// True when the run reached its requested stop (and, for check, met the tolerance).
bool run_completed(const RunOutput &out);

} // namespace lqd
