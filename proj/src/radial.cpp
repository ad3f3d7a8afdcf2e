#include "lqd/radial.hpp"

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
const cplx I(0.0, 1.0);

// Cayley chart of the upper half-plane onto the disc with 0 -> u and i -> 0.
cplx to_disc(cplx z, cplx u) { return u * (I - z) / (I + z); }

cplx to_half_plane(cplx w, cplx u) { return I * (u - w) / (u + w); }

// Normalized elementary disc map: f = T o F o T^{-1} o B with f(0) = 0, f'(0) > 0.
struct DiscStep {
    TiltedSlitMap map;
    cplx u;
    double dt;
    cplx zstar;
    cplx rot;

    cplx pull_back(cplx w, const NewtonOptions &opt) const
    {
        cplx c;
        if (std::abs(u + w) < 1e-300) {
            c = -u;
        } else {
            cplx z = to_half_plane(w, u);
            cplx y = map.invert(z, z + map.capacity() / z, opt);
            c = to_disc(y, u);
        }
        return (std::conj(rot) * c - zstar) / (1.0 - std::conj(zstar) * std::conj(rot) * c);
    }

    cplx from_half_plane(double x) const
    {
        cplx c = to_disc(cplx(x, 0.0), u);
        return (std::conj(rot) * c - zstar) / (1.0 - std::conj(zstar) * std::conj(rot) * c);
    }
};

DiscStep disc_step(const TiltedSlitMap &map, cplx u, const NewtonOptions &opt)
{
    cplx zeta = map.invert(I, I, opt);
    cplx fprime = map.derivative(zeta);
    cplx hprime = -fprime * (I + zeta) * (I + zeta) / 4.0;
    return {map, u, -std::log(std::abs(fprime) * zeta.imag()), to_disc(zeta, u), std::polar(1.0, -std::arg(hprime))};
}

cplx log_phi_direct(const RadialState &s)
{
    const double k = s.origin_degree;
    cplx u = std::polar(1.0, s.xi);
    cplx acc = s.log_origin_coefficient - (k + 2) * s.t + (k - 2) * I * s.xi;
    for (const auto &m : s.marks) {
        if (m.exponent.numerator() == 0)
            continue;
        // log(1 - z/P) continued along the ray from 0 to u is the principal branch.
        acc += to_double(m.exponent) * std::log(1.0 - u / m.position);
    }
    return acc;
}

struct RadialJet {
    Series xi;
    std::vector<Series> marks;
    Series log_phi;
    Series gamma;
    Series log_q;
    Series length;
};

RadialJet radial_jet(const RadialState &s, int order, RadialMode mode)
{
    const std::size_t m = static_cast<std::size_t>(order);
    const std::size_t nm = s.marks.size();
    const double k = s.origin_degree;
    std::vector<double> e(nm);
    for (std::size_t i = 0; i < nm; ++i)
        e[i] = to_double(s.marks[i].exponent);

    RadialJet j;
    j.xi = Series(m, s.xi);
    for (const auto &mk : s.marks)
        j.marks.emplace_back(m, mk.position);

    std::vector<Series> r(nm);
    Series u;
    for (std::size_t pass = 0; pass < m; ++pass) {
        u = exp(j.xi * I);
        for (std::size_t i = 0; i < nm; ++i)
            r[i] = reciprocal(u - j.marks[i]);
        Series acc(m);
        if (mode == RadialMode::origin_mark) {
            acc = Series(m, 3 + k);
            for (std::size_t i = 0; i < nm; ++i)
                acc += e[i] * (u * r[i]);
            acc = acc * I;
        } else {
            Series sum(m, 2.0);
            for (std::size_t i = 0; i < nm; ++i)
                sum -= e[i] * ((j.marks[i] + u) * r[i]);
            acc = sum * (-1.0 / (2.0 * I));
        }
        Series xi_next = integrate(real_part(acc), s.xi);
        std::vector<Series> marks_next(nm);
        for (std::size_t i = 0; i < nm; ++i)
            marks_next[i] = integrate(j.marks[i] * (u + j.marks[i]) * r[i], s.marks[i].position);
        j.xi = std::move(xi_next);
        j.marks = std::move(marks_next);
    }

    // Tip: gamma' = 2 sigma u^2 (Phi_t(u)/Q(gamma))^{1/2} with the continuous logarithms carried along.
    u = exp(j.xi * I);
    Series xi_dot = detail::derivative(j.xi);
    Series dlog_phi = Series(m, -(k + 2)) + ((k - 2) * I) * xi_dot;
    for (std::size_t i = 0; i < nm; ++i) {
        if (e[i] == 0)
            continue;
        Series p_dot = detail::derivative(j.marks[i]);
        dlog_phi += e[i] * ((I * u * xi_dot - p_dot) * reciprocal(u - j.marks[i]) - p_dot * reciprocal(j.marks[i]));
    }
    j.log_phi = integrate(dlog_phi, s.log_phi);

    const auto &factors = s.ambient->factors();
    j.gamma = Series(m, s.tip);
    j.log_q = Series(m, s.log_q);
    j.length = Series(m, s.arclength);
    Series u2 = u * u;
    for (std::size_t pass = 0; pass < m; ++pass) {
        Series w = 0.5 * (j.log_phi - j.log_q);
        Series g_dot = (2.0 * s.sign) * (u2 * exp(w));
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

RadialState advance(const RadialState &s, const RadialJet &j, double h)
{
    RadialState n = s;
    n.t = s.t + h;
    n.xi = j.xi.evaluate(h).real();
    for (std::size_t i = 0; i < n.marks.size(); ++i) {
        cplx p = j.marks[i].evaluate(h);
        if (s.on_circle[i])
            p /= std::abs(p);
        n.marks[i].position = p;
        n.log_marks[i] = nearest_branch(std::log(p), s.log_marks[i]);
    }
    n.tip = j.gamma.evaluate(h);
    n.arclength = j.length.evaluate(h).real();
    n.log_phi = nearest_branch(log_phi_direct(n), j.log_phi.evaluate(h));
    n.log_q = nearest_branch(s.ambient->log_evaluate(n.tip), j.log_q.evaluate(h));
    return n;
}

RadialSample make_sample(const RadialState &s, RadialMode mode)
{
    RadialMode alt = mode == RadialMode::origin_mark ? RadialMode::as_printed : RadialMode::origin_mark;
    RadialSample r;
    r.t = s.t;
    r.xi = s.xi;
    r.tip = s.tip;
    r.arclength = s.arclength;
    auto res = radial_constraint(s, mode);
    r.residual = res.residual;
    r.modulus_defect = res.modulus_defect;
    auto d = radial_rhs(s, mode);
    r.xi_dot = d.xi_dot;
    r.xi_dot_imag = d.xi_dot_imag;
    r.alt_xi_dot_imag = radial_rhs(s, alt).xi_dot_imag;
    auto ares = radial_constraint(s, alt);
    r.alt_residual = ares.residual;
    r.alt_modulus_defect = ares.modulus_defect;
    r.marks = s.marks;
    return r;
}

} // namespace

const char *to_string(RadialMode mode)
{
    return mode == RadialMode::origin_mark ? "origin_mark" : "as_printed";
}

RadialDerivatives radial_rhs(const RadialState &state, RadialMode mode)
{
    cplx u = std::polar(1.0, state.xi);
    cplx acc;
    RadialDerivatives d;
    d.mark_dots.reserve(state.marks.size());
    if (mode == RadialMode::origin_mark) {
        acc = 3.0 + state.origin_degree;
        for (const auto &m : state.marks) {
            if (std::abs(u - m.position) == 0.0)
                fail(ErrorKind::collision, "a marked point coincides with the driving point");
            acc += to_double(m.exponent) * u / (u - m.position);
        }
        acc *= I;
    } else {
        cplx sum = 2.0;
        for (const auto &m : state.marks) {
            if (std::abs(u - m.position) == 0.0)
                fail(ErrorKind::collision, "a marked point coincides with the driving point");
            sum += to_double(m.exponent) * (m.position + u) / (m.position - u);
        }
        acc = -sum / (2.0 * I);
    }
    d.xi_dot = acc.real();
    d.xi_dot_imag = acc.imag();
    for (const auto &m : state.marks)
        d.mark_dots.push_back(m.position * (u + m.position) / (u - m.position));
    return d;
}

RadialResidual radial_constraint(const RadialState &state, RadialMode mode)
{
    double decay = mode == RadialMode::origin_mark ? state.origin_degree + 2.0 : 2.0;
    cplx lr = state.log_pi0 - decay * state.t;
    for (std::size_t i = 0; i < state.marks.size(); ++i)
        lr -= to_double(state.marks[i].exponent) * state.log_marks[i];
    RadialResidual r;
    r.residual = std::abs(std::exp(2.0 * I * state.xi) - std::exp(lr));
    r.modulus_defect = std::abs(std::exp(lr.real()) - 1);
    return r;
}

std::vector<double> radial_departure_angles(const FactorizedQD &qd, double xi0, const Rational &n, double phi)
{
    cplx u0 = std::polar(1.0, xi0);
    for (const auto &f : qd.factors())
        if (std::abs(f.loc - u0) < 1e-12)
            u0 = f.loc;
    if (qd.degree_at(u0) != n)
        fail(ErrorKind::invalid_direction, "launch degree does not match the quadratic differential at the base point");
    // Leading coefficient in the Cayley chart picks up T'(0)^(n+2) with T'(0) = 2i u0.
    double arg_a = std::arg(qd.leading_coefficient(u0)) + to_double(n + 2) * (pi / 2 + xi0);
    double nn = to_double(n);
    std::vector<double> out;
    for (int k = -8 - static_cast<int>(std::abs(nn)); k <= 8 + static_cast<int>(std::abs(nn)); ++k) {
        double theta = (2 * phi - arg_a + 2 * pi * k) / (nn + 2);
        if (theta > 1e-12 && theta < pi - 1e-12)
            out.push_back(theta);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), out.end());
    return out;
}

RadialState radial_init(const FactorizedQD &qd, const RadialLaunch &launch, double s, const TraceConfig &config)
{
    if (launch.n.numerator() < 0)
        fail(ErrorKind::domain, "launch degree must be nonnegative");
    if (!(s > 0))
        fail(ErrorKind::domain, "startup size must be positive");
    Rational k = qd.degree_at(cplx(0.0));
    if (k.denominator() != 1)
        fail(ErrorKind::domain, "degree at the origin must be an integer");

    auto angles = radial_departure_angles(qd, launch.xi0, launch.n, launch.phi);
    if (launch.direction_index < 0 || static_cast<std::size_t>(launch.direction_index) >= angles.size())
        fail(ErrorKind::invalid_direction, "no admissible departure direction with index " + std::to_string(launch.direction_index));
    double theta = angles[static_cast<std::size_t>(launch.direction_index)];
    const double p = theta / pi;
    const cplx u0 = std::polar(1.0, launch.xi0);

    // Half-plane capacity s/2 gives a conformal-radius time close to s.
    auto step = disc_step(TiltedSlitMap::make(p, 0.0, s / 2), u0, config.newton);

    RadialState st;
    st.ambient = std::make_shared<FactorizedQD>(qd);
    st.t = step.dt;
    st.origin_degree = static_cast<int>(k.numerator());
    st.log_origin_coefficient = std::log(qd.leading_coefficient(cplx(0.0)));

    cplx log_pi0 = 2.0 * I * launch.xi0;
    for (const auto &f : qd.factors()) {
        if (f.loc == cplx(0.0) || std::abs(f.loc - u0) < 1e-12)
            continue;
        bool circle = std::abs(std::abs(f.loc) - 1) < 1e-12;
        cplx pos = step.pull_back(f.loc, config.newton);
        if (circle)
            pos /= std::abs(pos);
        cplx log0 = std::log(f.loc);
        st.marks.push_back({pos, f.exponent, MarkRole::interior});
        if (circle)
            st.marks.back().role = MarkRole::boundary_other;
        st.on_circle.push_back(circle);
        st.log_marks.push_back(nearest_branch(std::log(pos), log0));
        log_pi0 += to_double(f.exponent) * log0;
    }

    Rational ratio = best_rational(p);
    Rational mu_plus = (launch.n + 2) * ratio - 2;
    Rational mu_minus = launch.n - (launch.n + 2) * ratio;
    auto lm = step.map.landmarks();
    cplx c_minus = step.from_half_plane(lm.c_minus);
    cplx c_plus = step.from_half_plane(lm.c_plus);
    c_minus /= std::abs(c_minus);
    c_plus /= std::abs(c_plus);
    cplx log_u0 = I * launch.xi0;
    st.marks.push_back({c_minus, mu_minus, MarkRole::base_minus});
    st.on_circle.push_back(true);
    st.log_marks.push_back(nearest_branch(std::log(c_minus), log_u0));
    st.marks.push_back({c_plus, mu_plus, MarkRole::base_plus});
    st.on_circle.push_back(true);
    st.log_marks.push_back(nearest_branch(std::log(c_plus), log_u0));
    log_pi0 += to_double(mu_minus + mu_plus) * log_u0;
    st.log_pi0 = log_pi0;

    st.xi = nearest_branch(std::arg(step.from_half_plane(lm.tip_preimage)), launch.xi0);
    st.tip = to_disc(step.map.tip(), u0);
    st.arclength = std::abs(st.tip - u0);
    st.log_phi = log_phi_direct(st);
    st.log_q = qd.log_evaluate(st.tip);
    cplx v = 2.0 * std::polar(1.0, 2 * st.xi) * std::exp(0.5 * (st.log_phi - st.log_q));
    st.sign = (v * std::conj(st.tip - u0)).real() >= 0 ? 1.0 : -1.0;
    return st;
}

cplx radial_tip_velocity(const RadialState &state)
{
    return 2.0 * state.sign * std::polar(1.0, 2 * state.xi) * std::exp(0.5 * (state.log_phi - state.log_q));
}

RadialTraceResult radial_trace(const FactorizedQD &qd, const RadialLaunch &launch, const StopCriterion &stop,
                               const RadialConfig &config)
{
    const TraceConfig &tc = config.trace;
    tc.validate();
    if (!(stop.value > 0) || !std::isfinite(stop.value))
        fail(ErrorKind::domain, "stop value must be positive");
    const int m = tc.startup_samples;
    const RadialMode mode = config.mode;

    RadialTraceResult out;
    out.mode = mode;
    RadialState state = radial_init(qd, launch, tc.startup, tc);
    for (int j = 1; j < m; ++j) {
        double frac = static_cast<double>(j * j) / static_cast<double>(m * m);
        out.samples.push_back(make_sample(radial_init(qd, launch, tc.startup * frac, tc), mode));
    }
    out.samples.push_back(make_sample(state, mode));

    const bool by_length = stop.kind == StopCriterion::Kind::arclength;
    const double target = stop.value;
    auto reached = [&] { return by_length ? state.arclength >= target : state.t >= target * (1 - 1e-15); };

    std::size_t steps = 0;
    bool stopped = false;
    while (!reached()) {
        if (++steps > tc.max_steps)
            fail(ErrorKind::no_convergence, "step budget exhausted");
        try {
            auto d = radial_rhs(state, mode);
            if (mode == RadialMode::origin_mark && std::abs(d.xi_dot_imag) > tc.tol_imag)
                fail(ErrorKind::non_real, "radial driving velocity has an imaginary part");
            cplx u = std::polar(1.0, state.xi);
            double onset_weight = std::min(1.0, 2 * std::sqrt(state.t));
            if (!(std::abs(d.xi_dot) <= tc.loop_threshold / onset_weight))
                fail(ErrorKind::collision, "driving speed blew up");
            double gap = std::numeric_limits<double>::infinity();
            double tau = gap;
            for (std::size_t i = 0; i < state.marks.size(); ++i) {
                double g = std::abs(state.marks[i].position - u);
                if ((state.marks[i].role == MarkRole::base_minus || state.marks[i].role == MarkRole::base_plus)
                    && g < tc.tol_collision)
                    fail(ErrorKind::collision, "slit closed onto its base");
                gap = std::min(gap, g);
                double rel = std::abs(d.mark_dots[i]) + std::abs(d.xi_dot);
                if (rel > 0)
                    tau = std::min(tau, g / rel);
            }
            double h = tc.h * std::min(1.0, tau / tc.tau_ref);
            if (std::abs(d.xi_dot) > 0)
                h = std::min(h, 0.05 * gap / std::abs(d.xi_dot));
            if (!by_length)
                h = std::min(h, target - state.t);
            if (!(h > 1e-15 * std::max(state.t, 1e-12)))
                fail(ErrorKind::step_too_large, "step size underflow");
            auto jet = radial_jet(state, tc.order, mode);
            if (by_length && jet.length.evaluate(h).real() >= target)
                h = detail::solve_increasing(jet.length, target, h);
            RadialState next = advance(state, jet, h);
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
        out.samples.push_back(make_sample(state, mode));
    }
    if (!stopped)
        out.stop_reason = by_length ? StopReason::length_reached : StopReason::capacity_reached;
    log_info("radial trace finished: {} samples, stop={}", out.samples.size(), to_string(out.stop_reason));
    return out;
}

} // namespace lqd
