#pragma once

#include "lqd/chordal.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lqd {

// origin_mark: driving law with the z^K factor carried as a mark at 0 (derived form, default).
// as_printed: the printed law, stepped with its real part; kept for comparison runs.
enum class RadialMode { origin_mark, as_printed };

const char *to_string(RadialMode mode);

struct RadialLaunch {
    double xi0 = 0;
    Rational n = 0;
    double phi = 0;
    int direction_index = 0;
};

struct RadialConfig {
    TraceConfig trace;
    RadialMode mode = RadialMode::origin_mark;
};

struct RadialState {
    double t = 0;
    double xi = 0;
    int origin_degree = 0;
    // Marks other than the origin; circle marks are kept on |z| = 1.
    std::vector<MarkedPoint> marks;
    std::vector<cplx> log_marks;
    std::vector<bool> on_circle;
    cplx log_pi0 = 0;
    cplx log_origin_coefficient = 0;

    cplx tip = 0;
    double arclength = 0;
    cplx log_phi = 0;
    cplx log_q = 0;
    double sign = 1;
    std::shared_ptr<const FactorizedQD> ambient;
};

struct RadialDerivatives {
    double xi_dot = 0;
    double xi_dot_imag = 0;
    std::vector<cplx> mark_dots;
};

struct RadialResidual {
    double residual = 0;
    double modulus_defect = 0;
};

struct RadialSample {
    double t = 0;
    double xi = 0;
    cplx tip = 0;
    double arclength = 0;
    double residual = 0;
    double modulus_defect = 0;
    double xi_dot = 0;
    double xi_dot_imag = 0;
    // The other mode's numbers at the same state.
    double alt_xi_dot_imag = 0;
    double alt_residual = 0;
    double alt_modulus_defect = 0;
    std::vector<MarkedPoint> marks;
};

struct RadialTraceResult {
    std::vector<RadialSample> samples;
    StopReason stop_reason = StopReason::capacity_reached;
    std::string message;
    RadialMode mode = RadialMode::origin_mark;
};

RadialDerivatives radial_rhs(const RadialState &state, RadialMode mode = RadialMode::origin_mark);
RadialResidual radial_constraint(const RadialState &state, RadialMode mode = RadialMode::origin_mark);

std::vector<double> radial_departure_angles(const FactorizedQD &qd, double xi0, const Rational &n, double phi);
RadialState radial_init(const FactorizedQD &qd, const RadialLaunch &launch, double s, const TraceConfig &config = {});
cplx radial_tip_velocity(const RadialState &state);

RadialTraceResult radial_trace(const FactorizedQD &qd, const RadialLaunch &launch, const StopCriterion &stop,
                               const RadialConfig &config = {});

} // namespace lqd
