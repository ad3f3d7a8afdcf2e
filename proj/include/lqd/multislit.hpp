#pragma once

#include "lqd/chordal.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lqd {

struct SlitStart {
    double xi0 = 0;
    Rational n = 0;
    double phi = 0;
    int direction_index = 0;
};

// Growth weights b_k(t); must sum to 1 at every t.
using WeightFunction = std::function<std::vector<double>(double)>;

struct MultiState {
    double t = 0;
    std::vector<double> xis;
    std::vector<double> weights;
    std::vector<MarkedPoint> marks;
    // Slit a mark belongs to as its base pair, -1 for ambient marks.
    std::vector<int> owner;
    cplx sigma0 = 0;
};

struct MultiDerivatives {
    std::vector<double> xi_dots;
    std::vector<double> xi_dots_imag;
    std::vector<cplx> mark_dots;
};

struct MultiSample {
    double t = 0;
    std::vector<double> xis;
    std::vector<double> xi_dots;
    double residual = 0;
    std::vector<MarkedPoint> marks;
};

struct MultiTraceResult {
    std::vector<MultiSample> samples;
    StopReason stop_reason = StopReason::capacity_reached;
    std::string message;
    // Slit indices in the order their startup maps were composed.
    std::vector<int> startup_order;
};

MultiDerivatives multi_rhs(const MultiState &state, double tol_collision = 0);
double multi_constraint(const MultiState &state);

// Sequential startup: slit k gets an elementary slit of capacity-time b_k s, composed in order of base point.
MultiState multi_init(const FactorizedQD &qd, const std::vector<SlitStart> &starts, const std::vector<double> &weights,
                      double s, const TraceConfig &config = {});

MultiTraceResult multi_trace(const FactorizedQD &qd, const std::vector<SlitStart> &starts,
                             const std::vector<double> &weights, double t_end, const TraceConfig &config = {});
MultiTraceResult multi_trace(const FactorizedQD &qd, const std::vector<SlitStart> &starts, const WeightFunction &weights,
                             double t_end, const TraceConfig &config = {});

} // namespace lqd
