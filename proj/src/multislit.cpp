#include "lqd/multislit.hpp"

#include "engine.hpp"
#include "lqd/errors.hpp"
#include "log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace lqd {

namespace {

constexpr double pi = std::numbers::pi;

struct Flat {
    std::vector<cplx> pos;
    std::vector<double> exps;
};

Flat flatten(const MultiState &s)
{
    Flat f;
    f.pos.reserve(s.marks.size());
    f.exps.reserve(s.marks.size());
    for (const auto &m : s.marks) {
        f.pos.push_back(m.position);
        f.exps.push_back(to_double(m.exponent));
    }
    return f;
}

void check_weights(const std::vector<double> &w, std::size_t n)
{
    if (w.size() != n)
        fail(ErrorKind::domain, "need one growth weight per slit");
    double sum = 0;
    for (double b : w) {
        if (!(b > 0) || !std::isfinite(b))
            fail(ErrorKind::domain, "growth weights must be positive");
        sum += b;
    }
    if (std::abs(sum - 1) > 1e-9)
        fail(ErrorKind::domain, "growth weights must sum to 1");
}

cplx pull_back(const TiltedSlitMap &map, cplx pos, const NewtonOptions &opt)
{
    bool real = pos.imag() == 0.0;
    cplx guess = pos + map.capacity() / (pos - map.x());
    cplx z = map.invert(pos, guess, opt);
    if (real)
        z.imag(0.0);
    return z;
}

// Taylor coefficients in tau of b(t + tau) on [0, h] by interpolation at order+1 equispaced nodes.
std::vector<Series> weight_jets(const WeightFunction &wf, double t, double h, std::size_t n, int order)
{
    const std::size_t m = static_cast<std::size_t>(order);
    std::vector<double> nodes(m + 1);
    std::vector<std::vector<double>> vals(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        nodes[i] = h * static_cast<double>(i) / static_cast<double>(m);
        vals[i] = wf(t + nodes[i]);
        check_weights(vals[i], n);
    }
    std::vector<Series> out;
    for (std::size_t k = 0; k < n; ++k) {
        // Newton divided differences, then expand the nested form into monomials.
        std::vector<double> dd(m + 1);
        for (std::size_t i = 0; i <= m; ++i)
            dd[i] = vals[i][k];
        for (std::size_t j = 1; j <= m; ++j)
            for (std::size_t i = m; i >= j; --i)
                dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j]);
        std::vector<double> c(m + 1, 0.0);
        c[0] = dd[m];
        for (std::size_t j = m; j-- > 0;) {
            for (std::size_t q = m; q >= 1; --q)
                c[q] = c[q - 1] - nodes[j] * c[q];
            c[0] = dd[j] - nodes[j] * c[0];
        }
        Series s(m);
        for (std::size_t q = 0; q <= m; ++q)
            s[q] = c[q];
        out.push_back(std::move(s));
    }
    return out;
}

MultiSample make_sample(const MultiState &s)
{
    MultiSample r;
    r.t = s.t;
    r.xis = s.xis;
    r.xi_dots = multi_rhs(s).xi_dots;
    r.residual = multi_constraint(s);
    r.marks = s.marks;
    return r;
}

std::vector<int> canonical_order(const std::vector<SlitStart> &starts)
{
    std::vector<int> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return starts[a].xi0 < starts[b].xi0; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (starts[order[i]].xi0 == starts[order[i - 1]].xi0)
            fail(ErrorKind::domain, "slits must start at distinct base points");
    return order;
}

MultiState init_with_halving(const FactorizedQD &qd, const std::vector<SlitStart> &starts,
                             const std::vector<double> &weights, const TraceConfig &config)
{
    double s = config.startup;
    double res = 0;
    for (int attempt = 0; attempt < 30; ++attempt, s *= 0.5) {
        auto st = multi_init(qd, starts, weights, s, config);
        res = multi_constraint(st);
        if (res <= config.tol_startup)
            return st;
        log_debug("multi startup residual {} at s={}, halving", res, s);
    }
    fail(ErrorKind::startup_too_coarse, "multi-slit startup constraint residual " + std::to_string(res) + " above tolerance");
}

} // namespace

MultiDerivatives multi_rhs(const MultiState &state, double tol_collision)
{
    const std::size_t nd = state.xis.size();
    for (std::size_t l = 0; l < nd; ++l) {
        for (std::size_t k = l + 1; k < nd; ++k)
            if (std::abs(state.xis[l] - state.xis[k]) <= tol_collision)
                fail(ErrorKind::collision, "two driving values collided");
        for (const auto &m : state.marks)
            if (std::abs(m.position - state.xis[l]) <= tol_collision)
                fail(ErrorKind::collision, "a marked point reached a driving value");
    }
    Flat f = flatten(state);
    auto d = detail::flow_rhs(state.xis, state.weights, f.pos, f.exps);
    return {std::move(d.xi_dot), std::move(d.xi_dot_imag), std::move(d.mark_dot)};
}

double multi_constraint(const MultiState &state)
{
    double xi_sum = 0;
    for (double x : state.xis)
        xi_sum += x;
    cplx acc = 2.0 * xi_sum - state.sigma0;
    for (const auto &m : state.marks)
        acc += to_double(m.exponent) * m.position;
    return std::abs(acc);
}

MultiState multi_init(const FactorizedQD &qd, const std::vector<SlitStart> &starts, const std::vector<double> &weights,
                      double s, const TraceConfig &config)
{
    if (starts.empty())
        fail(ErrorKind::domain, "need at least one slit");
    check_weights(weights, starts.size());
    if (!(s > 0))
        fail(ErrorKind::domain, "startup capacity must be positive");
    const std::size_t n = starts.size();
    auto order = canonical_order(starts);

    std::vector<double> theta(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto &st = starts[k];
        if (st.n.numerator() < 0)
            fail(ErrorKind::domain, "launch degree must be nonnegative");
        auto angles = departure_angles(qd, st.xi0, st.n, st.phi);
        if (st.direction_index < 0 || static_cast<std::size_t>(st.direction_index) >= angles.size())
            fail(ErrorKind::invalid_direction,
                 "slit " + std::to_string(k) + ": no admissible departure direction with index " + std::to_string(st.direction_index));
        theta[k] = angles[static_cast<std::size_t>(st.direction_index)];
    }

    MultiState out;
    out.t = s;
    out.weights = weights;
    out.xis.assign(n, 0.0);
    cplx sigma0 = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        sigma0 += to_double(starts[k].n) * starts[k].xi0;
    for (const auto &f : qd.factors()) {
        bool at_base = std::any_of(starts.begin(), starts.end(), [&](const SlitStart &st) { return f.loc == cplx(st.xi0); });
        if (at_base)
            continue;
        MarkRole role = f.loc.imag() == 0.0 ? MarkRole::boundary_other : MarkRole::interior;
        out.marks.push_back({f.loc, f.exponent, role});
        out.owner.push_back(-1);
        sigma0 += to_double(f.exponent) * f.loc;
    }
    out.sigma0 = sigma0;

    // Current coordinates of the not yet launched base points.
    std::vector<double> base(n);
    for (std::size_t k = 0; k < n; ++k)
        base[k] = starts[k].xi0;
    std::vector<bool> launched(n, false);

    for (int k : order) {
        const auto &st = starts[static_cast<std::size_t>(k)];
        const double x = base[static_cast<std::size_t>(k)];
        double p = theta[static_cast<std::size_t>(k)] / pi;
        auto map = TiltedSlitMap::make(p, x, 2 * s * weights[static_cast<std::size_t>(k)]);
        for (auto &m : out.marks)
            m.position = pull_back(map, m.position, config.newton);
        for (std::size_t j = 0; j < n; ++j) {
            if (static_cast<int>(j) == k)
                continue;
            if (launched[j])
                out.xis[j] = pull_back(map, out.xis[j], config.newton).real();
            else
                base[j] = pull_back(map, base[j], config.newton).real();
        }
        Rational ratio = best_rational(p);
        Rational mu_plus = (st.n + 2) * ratio - 2;
        Rational mu_minus = st.n - (st.n + 2) * ratio;
        auto lm = map.landmarks();
        out.marks.push_back({lm.c_minus, mu_minus, MarkRole::base_minus});
        out.owner.push_back(k);
        out.marks.push_back({lm.c_plus, mu_plus, MarkRole::base_plus});
        out.owner.push_back(k);
        out.xis[static_cast<std::size_t>(k)] = lm.tip_preimage;
        launched[static_cast<std::size_t>(k)] = true;
    }
    if (n == 1) {
        // A single driver is pinned by the constraint.
        cplx rest = out.sigma0;
        for (const auto &m : out.marks)
            rest -= to_double(m.exponent) * m.position;
        out.xis[0] = 0.5 * rest.real();
    }
    return out;
}

MultiTraceResult multi_trace(const FactorizedQD &qd, const std::vector<SlitStart> &starts,
                             const std::vector<double> &weights, double t_end, const TraceConfig &config)
{
    check_weights(weights, starts.size());
    std::vector<double> w = weights;
    return multi_trace(qd, starts, WeightFunction([w](double) { return w; }), t_end, config);
}

MultiTraceResult multi_trace(const FactorizedQD &qd, const std::vector<SlitStart> &starts, const WeightFunction &weights,
                             double t_end, const TraceConfig &config)
{
    config.validate();
    if (!weights)
        fail(ErrorKind::domain, "missing growth weights");
    if (!(t_end > 0) || !std::isfinite(t_end))
        fail(ErrorKind::domain, "end time must be positive");
    const std::size_t n = starts.size();
    const int m = config.startup_samples;

    const std::vector<double> w0 = weights(0.0);
    check_weights(w0, n);

    MultiTraceResult out;
    out.startup_order = canonical_order(starts);
    MultiState state = init_with_halving(qd, starts, w0, config);
    for (int j = 1; j < m; ++j) {
        double frac = static_cast<double>(j * j) / static_cast<double>(m * m);
        out.samples.push_back(make_sample(multi_init(qd, starts, w0, state.t * frac, config)));
    }
    out.samples.push_back(make_sample(state));

    const double target = t_end;
    std::size_t steps = 0;
    bool stopped = false;
    while (state.t < target * (1 - 1e-15)) {
        if (++steps > config.max_steps)
            fail(ErrorKind::no_convergence, "step budget exhausted");
        try {
            state.weights = weights(state.t);
            check_weights(state.weights, n);
            Flat f = flatten(state);
            auto d = detail::flow_rhs(state.xis, state.weights, f.pos, f.exps);

            double onset_weight = std::min(1.0, 2 * std::sqrt(state.t));
            double vmax = 0;
            for (std::size_t l = 0; l < n; ++l) {
                for (std::size_t i = 0; i < state.marks.size(); ++i)
                    if (state.owner[i] == static_cast<int>(l)
                        && std::abs(state.marks[i].position - state.xis[l]) < config.tol_collision)
                        fail(ErrorKind::collision, "slit " + std::to_string(l) + " closed onto its base");
                if (!(std::abs(d.xi_dot[l]) <= config.loop_threshold / onset_weight))
                    fail(ErrorKind::collision, "slit " + std::to_string(l) + ": driving speed blew up");
                if (std::abs(d.xi_dot_imag[l]) > config.tol_imag)
                    fail(ErrorKind::non_real, "driving velocity has an imaginary part; marks are not conjugate-symmetric");
                vmax = std::max(vmax, std::abs(d.xi_dot[l]));
            }
            double tau = detail::collision_time(state.xis, f.pos, d);
            double gap = detail::min_gap(state.xis, f.pos);
            if (vmax > 0)
                tau = std::min(tau, gap / vmax);
            double h = config.h * std::min(1.0, tau / config.tau_ref);
            if (vmax > 0)
                h = std::min(h, 0.05 * gap / vmax);
            h = std::min(h, target - state.t);
            if (!(h > 1e-15 * std::max(state.t, 1e-12)))
                fail(ErrorKind::step_too_large, "step size underflow");

            auto wj = weight_jets(weights, state.t, h, n, config.order);
            auto jets = detail::flow_jets(state.xis, wj, f.pos, f.exps, config.order);
            MultiState next = state;
            next.t = state.t + h;
            for (std::size_t l = 0; l < n; ++l)
                next.xis[l] = jets.xi[l].evaluate(h).real();
            for (std::size_t i = 0; i < next.marks.size(); ++i) {
                cplx p = jets.marks[i].evaluate(h);
                if (state.marks[i].position.imag() == 0.0)
                    p.imag(0.0);
                next.marks[i].position = p;
            }
            state = std::move(next);
            if (target - state.t <= 1e-15 * target)
                state.t = target;
            state.weights = weights(state.t);
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::non_real || e.kind() == ErrorKind::domain)
                throw;
            out.stop_reason = StopReason::loop_detected;
            out.message = e.what();
            stopped = true;
            break;
        }
        out.samples.push_back(make_sample(state));
    }
    if (!stopped)
        out.stop_reason = StopReason::capacity_reached;
    log_info("multi trace finished: {} samples, stop={}", out.samples.size(), to_string(out.stop_reason));
    return out;
}

} // namespace lqd
