#include "lqd/chordal.hpp"

#include "engine.hpp"
#include "lqd/errors.hpp"
#include "log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lqd {

namespace {

constexpr double pi = std::numbers::pi;

struct Flat {
    std::vector<double> xi;
    std::vector<cplx> pos;
    std::vector<double> exps;
};

Flat flatten(const ChordalState &s)
{
    Flat f;
    f.xi = {s.xi};
    f.pos.reserve(s.marks.size());
    f.exps.reserve(s.marks.size());
    for (const auto &m : s.marks) {
        f.pos.push_back(m.position);
        f.exps.push_back(to_double(m.exponent));
    }
    return f;
}

struct ChordalJet {
    detail::FlowJets flow;
    Series gamma;
    Series log_phi;
    Series log_q;
    Series length;
};

ChordalJet chordal_jet(const ChordalState &s, int order)
{
    const std::size_t m = static_cast<std::size_t>(order);
    Flat f = flatten(s);
    ChordalJet j;
    j.flow = detail::flow_jets(f.xi, {Series(m, 1.0)}, f.pos, f.exps, order);

    // d/dt log Phi = sum e (P' - xi') / (P - xi)
    const Series &xi = j.flow.xi[0];
    Series xi_dot = detail::derivative(xi);
    Series dlog_phi(m);
    for (std::size_t i = 0; i < f.pos.size(); ++i) {
        const Series &p = j.flow.marks[i];
        dlog_phi += f.exps[i] * ((detail::derivative(p) - xi_dot) * reciprocal(p - xi));
    }
    j.log_phi = integrate(dlog_phi, s.log_phi);

    const auto &factors = s.ambient->factors();
    j.gamma = Series(m, s.tip);
    j.log_q = Series(m, s.log_q);
    j.length = Series(m, s.arclength);
    for (std::size_t pass = 0; pass < m; ++pass) {
        Series w = 0.5 * (j.log_phi - j.log_q);
        Series g_dot = (-2.0 * s.sign) * exp(w);
        Series psi(m);
        for (const auto &fac : factors)
            psi += to_double(fac.exponent) * reciprocal(j.gamma + (-fac.loc));
        Series lq_dot = g_dot * psi;
        Series len_dot = 2.0 * exp(real_part(w));
        j.gamma = integrate(g_dot, s.tip);
        j.log_q = integrate(lq_dot, s.log_q);
        j.length = integrate(len_dot, s.arclength);
    }
    return j;
}

ChordalState advance(const ChordalState &s, const ChordalJet &j, double h)
{
    ChordalState n = s;
    n.t = s.t + h;
    n.xi = j.flow.xi[0].evaluate(h).real();
    for (std::size_t i = 0; i < n.marks.size(); ++i) {
        cplx p = j.flow.marks[i].evaluate(h);
        if (s.marks[i].position.imag() == 0.0)
            p.imag(0.0);
        n.marks[i].position = p;
    }
    n.tip = j.gamma.evaluate(h);
    n.arclength = j.length.evaluate(h).real();
    n.log_phi = nearest_branch(log_phi_direct(n), j.log_phi.evaluate(h));
    n.log_q = nearest_branch(s.ambient->log_evaluate(n.tip), j.log_q.evaluate(h));
    return n;
}

double choose_sign(const ChordalState &s, cplx heading)
{
    cplx v = -2.0 * std::exp(0.5 * (s.log_phi - s.log_q));
    return (v * std::conj(heading)).real() >= 0 ? 1.0 : -1.0;
}

// One startup attempt for the first arc at capacity-time s.
ChordalState launch_state(const FactorizedQD &qd, double xi0, const Rational &n, double phi, double theta, double s,
                          const TraceConfig &config)
{
    Rational ratio = best_rational(theta / pi);
    Rational mu_plus = (n + 2) * ratio - 2;
    Rational mu_minus = n - (n + 2) * ratio;
    auto map = TiltedSlitMap::make(theta / pi, xi0, 2 * s);

    ChordalState st;
    st.ambient = std::make_shared<FactorizedQD>(qd);
    st.t = s;
    st.prefactor = qd.prefactor();
    st.phi = phi;
    st.n_current = n;
    cplx sigma0 = to_double(n) * xi0;
    for (const auto &f : qd.factors()) {
        if (f.loc == cplx(xi0))
            continue;
        cplx guess = f.loc + map.capacity() / (f.loc - xi0);
        cplx pos = map.invert(f.loc, guess, config.newton);
        if (f.loc.imag() == 0.0)
            pos.imag(0.0);
        MarkRole role = f.loc.imag() == 0.0 ? MarkRole::boundary_other : MarkRole::interior;
        st.marks.push_back({pos, f.exponent, role});
        sigma0 += to_double(f.exponent) * f.loc;
    }
    auto lm = map.landmarks();
    st.marks.push_back({lm.c_minus, mu_minus, MarkRole::base_minus});
    st.marks.push_back({lm.c_plus, mu_plus, MarkRole::base_plus});
    st.sigma0 = sigma0;
    cplx rest = sigma0;
    for (const auto &m : st.marks)
        rest -= to_double(m.exponent) * m.position;
    st.xi = 0.5 * rest.real();
    st.tip = map.tip();
    st.arclength = std::abs(st.tip - xi0);
    st.log_phi = log_phi_direct(st);
    st.log_q = qd.log_evaluate(st.tip);
    st.sign = choose_sign(st, std::polar(1.0, theta));
    return st;
}

ChordalState corner_state(const ChordalState &pre, double delta, double new_phi, double s, const TraceConfig &config)
{
    cplx u = tip_velocity(pre);
    u /= std::abs(u);
    cplx v = u * std::polar(1.0, -delta);
    Rational d = best_rational(delta / pi);
    double theta = (pi - delta) / 2;
    auto map = TiltedSlitMap::make(theta / pi, pre.xi, 2 * s);

    cplx q_tip = pre.ambient->evaluate(pre.tip);
    if (q_tip == cplx(0.0) || !std::isfinite(std::abs(q_tip)))
        fail(ErrorKind::corner_at_singularity, "corner at a zero or pole of the quadratic differential");

    ChordalState st = pre;
    st.t = pre.t + s;
    st.phi = new_phi;
    st.n_current = Rational(2);
    cplx sigma0 = 2.0 * pre.xi;
    for (auto &m : st.marks) {
        sigma0 += to_double(m.exponent) * m.position;
        bool real = m.position.imag() == 0.0;
        cplx guess = m.position + map.capacity() / (m.position - pre.xi);
        m.position = map.invert(m.position, guess, config.newton);
        if (real)
            m.position.imag(0.0);
        if (m.role == MarkRole::base_minus || m.role == MarkRole::base_plus)
            m.role = MarkRole::boundary_other;
    }
    auto lm = map.landmarks();
    st.marks.push_back({lm.c_minus, 2 * d, MarkRole::base_minus});
    st.marks.push_back({lm.c_plus, -2 * d, MarkRole::base_plus});
    st.sigma0 = sigma0;
    cplx rest = sigma0;
    for (const auto &m : st.marks)
        rest -= to_double(m.exponent) * m.position;
    st.xi = 0.5 * rest.real();

    // Local quadratic behaviour of the map at the launch point places the new tip.
    double z_len = std::abs(map.tip() - pre.xi);
    double ell = 0.5 * std::exp(0.5 * (pre.log_phi - pre.log_q).real()) * z_len * z_len;
    st.tip = pre.tip + ell * v;
    st.arclength = pre.arclength + ell;
    st.log_phi = log_phi_direct(st);
    st.log_q = nearest_branch(pre.ambient->log_evaluate(st.tip), pre.log_q);
    st.sign = choose_sign(st, v);
    return st;
}

Sample make_sample(const ChordalState &s, int arc)
{
    Sample r;
    r.t = s.t;
    r.xi = s.xi;
    r.tip = s.tip;
    r.arclength = s.arclength;
    r.residual = constraint_residual(s);
    auto d = rhs(s);
    r.xi_dot = d.xi_dot;
    r.xi_dot_imag = d.xi_dot_imag;
    r.traj_defect = trajectory_defect(s);
    r.phi = s.phi;
    r.arc = arc;
    r.marks = s.marks;
    return r;
}

std::vector<Rational> exponent_multiset(const ChordalState &s)
{
    std::vector<Rational> e{Rational(2)};
    for (const auto &m : s.marks)
        if (m.exponent.numerator() != 0)
            e.push_back(m.exponent);
    return e;
}

} // namespace

const char *to_string(MarkRole role)
{
    switch (role) {
    case MarkRole::base_minus: return "base_minus";
    case MarkRole::base_plus: return "base_plus";
    case MarkRole::interior: return "interior";
    case MarkRole::boundary_other: return "boundary_other";
    }
    return "unknown";
}

const char *to_string(StopReason reason)
{
    switch (reason) {
    case StopReason::capacity_reached: return "capacity_reached";
    case StopReason::length_reached: return "length_reached";
    case StopReason::loop_detected: return "loop_detected";
    case StopReason::corner: return "corner";
    }
    return "unknown";
}

void TraceConfig::validate() const
{
    auto positive = [](double v, const char *name) {
        if (!(v > 0) || !std::isfinite(v))
            fail(ErrorKind::domain, std::string("config value '") + name + "' must be positive");
    };
    positive(h, "h");
    positive(startup, "startup");
    positive(tol_constraint, "tol_constraint");
    positive(tol_startup, "tol_startup");
    positive(tol_collision, "tol_collision");
    positive(tol_imag, "tol_imag");
    positive(loop_threshold, "loop_threshold");
    positive(tau_ref, "tau_ref");
    positive(newton.tol, "tol_newton");
    if (order < 1 || order > 8)
        fail(ErrorKind::domain, "Taylor order must be between 1 and 8");
    if (startup_samples < 1)
        fail(ErrorKind::domain, "startup_samples must be at least 1");
    if (newton.max_iter < 1)
        fail(ErrorKind::domain, "Newton iteration cap must be positive");
}

Derivatives rhs(const ChordalState &state)
{
    Flat f = flatten(state);
    for (cplx p : f.pos)
        if (std::abs(p - state.xi) == 0.0)
            fail(ErrorKind::collision, "a marked point coincides with the driving value");
    auto d = detail::flow_rhs(f.xi, {1.0}, f.pos, f.exps);
    return {d.xi_dot[0], d.xi_dot_imag[0], std::move(d.mark_dot)};
}

double constraint_residual(const ChordalState &state)
{
    cplx acc = 2.0 * state.xi - state.sigma0;
    for (const auto &m : state.marks)
        acc += to_double(m.exponent) * m.position;
    return std::abs(acc);
}

ChordalState taylor_step(const ChordalState &state, double h, int order)
{
    if (order < 1 || order > 8)
        fail(ErrorKind::domain, "Taylor order must be between 1 and 8");
    if (!(h > 0))
        fail(ErrorKind::domain, "step must be positive");
    if (!state.ambient)
        fail(ErrorKind::domain, "state has no ambient quadratic differential");
    auto d = rhs(state);
    Flat f = flatten(state);
    double gap = detail::min_gap(f.xi, f.pos);
    if (h * std::abs(d.xi_dot) >= 0.1 * gap)
        fail(ErrorKind::step_too_large, "step exceeds the collision horizon");
    return advance(state, chordal_jet(state, order), h);
}

std::vector<double> departure_angles(const FactorizedQD &qd, double xi0, const Rational &n, double phi)
{
    if (qd.degree_at(cplx(xi0)) != n)
        fail(ErrorKind::invalid_direction, "launch degree does not match the quadratic differential at the base point");
    cplx a = qd.leading_coefficient(cplx(xi0));
    double nn = to_double(n);
    std::vector<double> out;
    for (int k = -8 - static_cast<int>(std::abs(nn)); k <= 8 + static_cast<int>(std::abs(nn)); ++k) {
        double theta = (2 * phi - std::arg(a) + 2 * pi * k) / (nn + 2);
        if (theta > 1e-12 && theta < pi - 1e-12)
            out.push_back(theta);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), out.end());
    return out;
}

ChordalState init_arc(const FactorizedQD &qd, double xi0, const Rational &n, double phi, int direction_index, double s,
                      const TraceConfig &config)
{
    if (n.numerator() < 0)
        fail(ErrorKind::domain, "launch degree must be nonnegative");
    auto angles = departure_angles(qd, xi0, n, phi);
    if (direction_index < 0 || static_cast<std::size_t>(direction_index) >= angles.size())
        fail(ErrorKind::invalid_direction, "no admissible departure direction with index " + std::to_string(direction_index));
    double theta = angles[static_cast<std::size_t>(direction_index)];
    double res = 0;
    for (int attempt = 0; attempt < 30; ++attempt, s *= 0.5) {
        auto st = launch_state(qd, xi0, n, phi, theta, s, config);
        res = constraint_residual(st);
        if (res <= config.tol_startup)
            return st;
        log_debug("startup residual {} at s={}, halving", res, s);
    }
    fail(ErrorKind::startup_too_coarse, "startup constraint residual " + std::to_string(res) + " above tolerance");
}

ChordalState corner_turn_at(const ChordalState &state, double delta, double new_phi, double s, const TraceConfig &config)
{
    if (!(std::abs(delta) < pi))
        fail(ErrorKind::domain, "corner turn must satisfy |delta| < pi");
    if (delta == 0.0) {
        ChordalState st = state;
        st.phi = new_phi;
        return st;
    }
    return corner_state(state, delta, new_phi, s, config);
}

ChordalState corner_turn(const ChordalState &state, double delta, double new_phi, const TraceConfig &config)
{
    double s = config.startup;
    double res = 0;
    for (int attempt = 0; attempt < 30; ++attempt, s *= 0.5) {
        auto st = corner_turn_at(state, delta, new_phi, s, config);
        res = constraint_residual(st);
        if (res <= config.tol_startup)
            return st;
        log_debug("corner startup residual {} at s={}, halving", res, s);
    }
    fail(ErrorKind::startup_too_coarse, "corner startup constraint residual " + std::to_string(res) + " above tolerance");
}

cplx log_phi_direct(const ChordalState &state)
{
    cplx acc = std::log(state.prefactor);
    for (const auto &m : state.marks) {
        if (m.exponent.numerator() == 0)
            continue;
        acc += to_double(m.exponent) * downward_log(state.xi - m.position);
    }
    return acc;
}

double trajectory_defect(const ChordalState &state)
{
    return detail::wrap_angle(log_phi_direct(state).imag() - 2 * state.phi);
}

cplx tip_velocity(const ChordalState &state)
{
    return -2.0 * state.sign * std::exp(0.5 * (state.log_phi - state.log_q));
}

cplx tip_velocity(const ChordalState &state, const FactorizedQD &qd)
{
    cplx lq = nearest_branch(qd.log_evaluate(state.tip), state.log_q);
    cplx lphi = nearest_branch(log_phi_direct(state), state.log_phi);
    return -2.0 * state.sign * std::exp(0.5 * (lphi - lq));
}

bool loop_guard(const ChordalState &state, double threshold, double tol_collision)
{
    for (const auto &m : state.marks) {
        if ((m.role == MarkRole::base_minus || m.role == MarkRole::base_plus)
            && std::abs(m.position - state.xi) < tol_collision)
            return true;
    }
    Flat f = flatten(state);
    auto d = detail::flow_rhs(f.xi, {1.0}, f.pos, f.exps);
    return !(std::abs(d.xi_dot[0]) <= threshold);
}

TraceResult trace(const FactorizedQD &qd, const LaunchSpec &start, const std::vector<PathSegment> &segments,
                  const TraceConfig &config)
{
    config.validate();
    if (segments.empty())
        fail(ErrorKind::domain, "trace needs at least one segment");
    for (const auto &seg : segments)
        if (!(seg.stop.value > 0))
            fail(ErrorKind::domain, "segment stop values must be positive");

    TraceResult out;
    const int m = config.startup_samples;

    auto angles = departure_angles(qd, start.xi0, start.n, segments[0].phi);
    if (angles.empty())
        fail(ErrorKind::invalid_direction, "no admissible departure direction");
    int dir = start.direction_index;
    if (dir < 0) {
        dir = 0;
        if (segments[0].heading) {
            double best = -2;
            for (std::size_t i = 0; i < angles.size(); ++i) {
                double score = (std::polar(1.0, angles[i]) * std::conj(*segments[0].heading)).real() / std::abs(*segments[0].heading);
                if (score > best) {
                    best = score;
                    dir = static_cast<int>(i);
                }
            }
        }
    }
    ChordalState state = init_arc(qd, start.xi0, start.n, segments[0].phi, dir, config.startup, config);
    {
        double theta = angles[static_cast<std::size_t>(dir)];
        for (int j = 1; j < m; ++j) {
            double frac = static_cast<double>(j * j) / static_cast<double>(m * m);
            out.samples.push_back(make_sample(launch_state(qd, start.xi0, start.n, segments[0].phi, theta, state.t * frac, config), 0));
        }
    }
    out.samples.push_back(make_sample(state, 0));

    std::size_t steps = 0;
    int arc = 0;
    bool stopped = false;
    double onset_t = 0;
    for (std::size_t k = 0; k < segments.size() && !stopped; ++k) {
        const auto &seg = segments[k];
        double length_base = state.arclength;
        if (k == 0)
            length_base = 0;
        if (k > 0) {
            length_base = state.arclength;
            cplx u = tip_velocity(state);
            u /= std::abs(u);
            auto [v1, v2] = state.ambient->trajectory_tangents(state.tip, seg.phi);
            double d1 = -std::arg(v1 * std::conj(u));
            double d2 = -std::arg(v2 * std::conj(u));
            double delta = std::abs(d1) <= std::abs(d2) ? d1 : d2;
            if (seg.heading) {
                cplx hd = *seg.heading;
                delta = (v1 * std::conj(hd)).real() >= (v2 * std::conj(hd)).real() ? d1 : d2;
            } else if (seg.turn == TurnHint::left) {
                delta = std::min(d1, d2);
            } else if (seg.turn == TurnHint::right) {
                delta = std::max(d1, d2);
            }
            if (std::abs(delta) < 1e-12) {
                state.phi = seg.phi;
            } else if (std::abs(delta) > pi - 1e-9) {
                out.stop_reason = StopReason::corner;
                out.message = "segment reverses onto the slit";
                stopped = true;
                break;
            } else {
                ++arc;
                try {
                    ChordalState next = corner_turn(state, delta, seg.phi, config);
                    double s_used = next.t - state.t;
                    for (int j = 1; j < m; ++j) {
                        double frac = static_cast<double>(j * j) / static_cast<double>(m * m);
                        out.samples.push_back(make_sample(corner_turn_at(state, delta, seg.phi, s_used * frac, config), arc));
                    }
                    log_info("corner {} at t={} delta={}", k, state.t, delta);
                    out.corners.push_back({state.t, state.tip, delta, exponent_multiset(next)});
                    onset_t = state.t;
                    state = std::move(next);
                } catch (const Error &e) {
                    if (e.kind() != ErrorKind::corner_at_singularity)
                        throw;
                    out.stop_reason = StopReason::corner;
                    out.message = e.what();
                    stopped = true;
                    break;
                }
                out.samples.push_back(make_sample(state, arc));
            }
        }

        const bool by_length = seg.stop.kind == StopCriterion::Kind::arclength;
        const double target = by_length ? length_base + seg.stop.value : seg.stop.value;
        auto reached = [&] { return by_length ? state.arclength >= target : state.t >= target * (1 - 1e-15); };

        while (!reached()) {
            if (++steps > config.max_steps)
                fail(ErrorKind::no_convergence, "step budget exhausted");
            // Right after a launch or corner |xi'| ~ 1/(2 sqrt(t - onset)) with no loop in sight.
            double onset_weight = std::min(1.0, 2 * std::sqrt(state.t - onset_t));
            if (loop_guard(state, config.loop_threshold / onset_weight, config.tol_collision)) {
                out.stop_reason = StopReason::loop_detected;
                out.message = "loop guard fired";
                stopped = true;
                break;
            }
            try {
                Flat f = flatten(state);
                auto d = detail::flow_rhs(f.xi, {1.0}, f.pos, f.exps);
                if (std::abs(d.xi_dot_imag[0]) > config.tol_imag)
                    fail(ErrorKind::non_real, "driving velocity has an imaginary part; marks are not conjugate-symmetric");
                double tau = detail::collision_time(f.xi, f.pos, d);
                double gap = detail::min_gap(f.xi, f.pos);
                if (std::abs(d.xi_dot[0]) > 0)
                    tau = std::min(tau, gap / std::abs(d.xi_dot[0]));
                double h = config.h * std::min(1.0, tau / config.tau_ref);
                if (std::abs(d.xi_dot[0]) > 0)
                    h = std::min(h, 0.05 * gap / std::abs(d.xi_dot[0]));
                if (!by_length)
                    h = std::min(h, target - state.t);
                if (!(h > 1e-15 * std::max(state.t, 1e-12)))
                    fail(ErrorKind::step_too_large, "step size underflow");
                auto jet = chordal_jet(state, config.order);
                if (by_length && jet.length.evaluate(h).real() >= target)
                    h = detail::solve_increasing(jet.length, target, h);
                ChordalState next = advance(state, jet, h);
                if (by_length && jet.length.evaluate(h).real() >= target * (1 - 1e-15))
                    next.arclength = std::max(next.arclength, target);
                state = std::move(next);
                if (!by_length && target - state.t <= 1e-15 * target)
                    state.t = target;
            } catch (const Error &e) {
                if (e.kind() == ErrorKind::non_real)
                    throw;
                out.stop_reason = StopReason::loop_detected;
                out.message = e.what();
                stopped = true;
                break;
            }
            out.samples.push_back(make_sample(state, arc));
        }
        if (!stopped)
            out.stop_reason = by_length ? StopReason::length_reached : StopReason::capacity_reached;
    }
    log_info("trace finished: {} samples, stop={}", out.samples.size(), to_string(out.stop_reason));
    return out;
}

} // namespace lqd
