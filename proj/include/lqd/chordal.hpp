#pragma once

#include "lqd/qdiff.hpp"
#include "lqd/slitmaps.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lqd {

enum class MarkRole { base_minus, base_plus, interior, boundary_other };

const char *to_string(MarkRole role);

struct MarkedPoint {
    cplx position;
    Rational exponent;
    MarkRole role;
};

struct TraceConfig {
    double h = 1e-4;
    int order = 4;
    double startup = 1e-6;
    double tol_constraint = 1e-6;
    double tol_startup = 1e-8;
    double tol_collision = 1e-9;
    double tol_imag = 1e-8;
    double loop_threshold = 1e4;
    // Steps shrink like tau/tau_ref where tau is the time scale on which a mark can reach xi.
    double tau_ref = 1e-2;
    int startup_samples = 8;
    std::size_t max_steps = 20'000'000;
    NewtonOptions newton;

    void validate() const;
};

struct ChordalState {
    double t = 0;
    double xi = 0;
    std::vector<MarkedPoint> marks;
    cplx sigma0 = 0;
    cplx prefactor = 1;
    double phi = 0;
    cplx tip = 0;
    double arclength = 0;
    Rational n_current = 0;

    // Continuous logarithms of Phi_t(xi) and Q(tip), and the square-root sign of the tip velocity.
    cplx log_phi = 0;
    cplx log_q = 0;
    double sign = 1;
    std::shared_ptr<const FactorizedQD> ambient;
};

struct Derivatives {
    double xi_dot = 0;
    double xi_dot_imag = 0;
    std::vector<cplx> mark_dots;
};

enum class TurnHint { none, left, right };

struct StopCriterion {
    enum class Kind { capacity, arclength };
    Kind kind = Kind::arclength;
    double value = 0;
};

struct PathSegment {
    double phi = 0;
    StopCriterion stop;
    // Optional preferred direction of travel; phi alone fixes only a line.
    std::optional<cplx> heading;
    TurnHint turn = TurnHint::none;
};

struct LaunchSpec {
    double xi0 = 0;
    Rational n = 0;
    // -1 picks the departure direction closest to the first segment's heading (0 without one).
    int direction_index = -1;
};

enum class StopReason { capacity_reached, length_reached, loop_detected, corner };

const char *to_string(StopReason reason);

struct Sample {
    double t = 0;
    double xi = 0;
    cplx tip = 0;
    double arclength = 0;
    double residual = 0;
    double xi_dot = 0;
    double xi_dot_imag = 0;
    // arg[Q(tip) tip'^2] - 2 phi, wrapped to (-pi, pi].
    double traj_defect = 0;
    double phi = 0;
    int arc = 0;
    std::vector<MarkedPoint> marks;
};

struct CornerRecord {
    double t = 0;
    cplx tip = 0;
    double delta = 0;
    // Exponent multiset of the implied Q_t right after the corner, 2 at xi first.
    std::vector<Rational> exponents;
};

struct TraceResult {
    std::vector<Sample> samples;
    StopReason stop_reason = StopReason::capacity_reached;
    std::vector<CornerRecord> corners;
    std::string message;
};

Derivatives rhs(const ChordalState &state);
double constraint_residual(const ChordalState &state);
ChordalState taylor_step(const ChordalState &state, double h, int order);

// Admissible departure angles in (0, pi), ascending, for a phi-trajectory leaving xi0.
std::vector<double> departure_angles(const FactorizedQD &qd, double xi0, const Rational &n, double phi);

ChordalState init_arc(const FactorizedQD &qd, double xi0, const Rational &n, double phi, int direction_index,
                      double s, const TraceConfig &config = {});
ChordalState corner_turn(const ChordalState &state, double delta, double new_phi, const TraceConfig &config = {});
// Same as corner_turn with an explicit startup capacity-time (no halving).
ChordalState corner_turn_at(const ChordalState &state, double delta, double new_phi, double s,
                            const TraceConfig &config = {});

cplx tip_velocity(const ChordalState &state, const FactorizedQD &qd);
cplx tip_velocity(const ChordalState &state);
bool loop_guard(const ChordalState &state, double threshold, double tol_collision = 1e-9);

// log R + sum e log(xi - P) on the downward branch; its imaginary part fixes the trajectory angle.
cplx log_phi_direct(const ChordalState &state);
double trajectory_defect(const ChordalState &state);

TraceResult trace(const FactorizedQD &qd, const LaunchSpec &start, const std::vector<PathSegment> &segments,
                  const TraceConfig &config = {});

} // namespace lqd
