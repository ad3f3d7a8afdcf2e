#pragma once

#include "lqd/job.hpp"

#include <ostream>
#include <string>

namespace lqd {

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// Header row, one row per sample, stop_reason filled on the last row only.
void write_csv(std::ostream &os, const TraceResult &r, bool with_marks = true);
void write_csv(std::ostream &os, const MultiTraceResult &r);
void write_csv(std::ostream &os, const RadialTraceResult &r);
void write_csv(std::ostream &os, const RunOutput &out);

// Two panels: the curve on the left, the driving function(s) against t on the right.
void write_svg(std::ostream &os, const RunOutput &out);

} // namespace lqd
