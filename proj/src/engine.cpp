#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lqd::detail {

FlowPoint flow_rhs(const std::vector<double> &xi, const std::vector<double> &weights, const std::vector<cplx> &marks,
                   const std::vector<double> &exps)
{
    const std::size_t nd = xi.size();
    FlowPoint out;
    out.xi_dot.assign(nd, 0.0);
    out.xi_dot_imag.assign(nd, 0.0);
    out.mark_dot.assign(marks.size(), 0.0);
    for (std::size_t l = 0; l < nd; ++l) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < nd; ++k)
            if (k != l)
                acc += 2.0 * (weights[k] + weights[l]) / (xi[l] - xi[k]);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < marks.size(); ++i)
            sum += exps[i] * (1.0 / (xi[l] - marks[i]));
        acc += weights[l] * sum;
        out.xi_dot[l] = acc.real();
        out.xi_dot_imag[l] = acc.imag();
    }
    for (std::size_t i = 0; i < marks.size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t l = 0; l < nd; ++l)
            acc += 2.0 * weights[l] / (marks[i] - xi[l]);
        out.mark_dot[i] = acc;
    }
    return out;
}

FlowJets flow_jets(const std::vector<double> &xi, const std::vector<Series> &weights, const std::vector<cplx> &marks,
                   const std::vector<double> &exps, int order)
{
    const std::size_t m = static_cast<std::size_t>(order);
    const std::size_t nd = xi.size();
    const std::size_t nm = marks.size();
    FlowJets j;
    for (double x : xi)
        j.xi.emplace_back(m, x);
    for (cplx p : marks)
        j.marks.emplace_back(m, p);

    std::vector<Series> r(nm * nd);
    for (std::size_t pass = 0; pass < m; ++pass) {
        for (std::size_t i = 0; i < nm; ++i)
            for (std::size_t l = 0; l < nd; ++l)
                r[i * nd + l] = reciprocal(j.marks[i] - j.xi[l]);
        std::vector<Series> xi_next(nd), marks_next(nm);
        for (std::size_t l = 0; l < nd; ++l) {
            Series acc(m);
            for (std::size_t k = 0; k < nd; ++k)
                if (k != l)
                    acc += 2.0 * ((weights[k] + weights[l]) * reciprocal(j.xi[l] - j.xi[k]));
            Series sum(m);
            for (std::size_t i = 0; i < nm; ++i)
                sum -= exps[i] * r[i * nd + l];
            acc += weights[l] * sum;
            xi_next[l] = integrate(real_part(acc), xi[l]);
        }
        for (std::size_t i = 0; i < nm; ++i) {
            Series acc(m);
            for (std::size_t l = 0; l < nd; ++l)
                acc += 2.0 * (weights[l] * r[i * nd + l]);
            marks_next[i] = integrate(acc, marks[i]);
        }
        j.xi = std::move(xi_next);
        j.marks = std::move(marks_next);
    }
    return j;
}

Series derivative(const Series &s)
{
    Series d(s.order());
    for (std::size_t k = 1; k <= s.order(); ++k)
        d[k - 1] = static_cast<double>(k) * s[k];
    return d;
}

double collision_time(const std::vector<double> &xi, const std::vector<cplx> &marks, const FlowPoint &d)
{
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < xi.size(); ++l) {
        for (std::size_t i = 0; i < marks.size(); ++i) {
            double rel = std::abs(d.mark_dot[i] - d.xi_dot[l]);
            if (rel > 0)
                tau = std::min(tau, std::abs(marks[i] - xi[l]) / rel);
        }
        for (std::size_t k = 0; k < xi.size(); ++k) {
            if (k == l)
                continue;
            double rel = std::abs(d.xi_dot[k] - d.xi_dot[l]);
            if (rel > 0)
                tau = std::min(tau, std::abs(xi[k] - xi[l]) / rel);
        }
    }
    return tau;
}

double min_gap(const std::vector<double> &xi, const std::vector<cplx> &marks)
{
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < xi.size(); ++l) {
        for (cplx p : marks)
            g = std::min(g, std::abs(p - xi[l]));
        for (std::size_t k = l + 1; k < xi.size(); ++k)
            g = std::min(g, std::abs(xi[k] - xi[l]));
    }
    return g;
}

double solve_increasing(const Series &poly, double target, double tau_max)
{
    double lo = 0, hi = tau_max;
    double tau = tau_max * (target - poly.evaluate(0).real()) / (poly.evaluate(tau_max).real() - poly.evaluate(0).real());
    tau = std::clamp(tau, lo, hi);
    for (int it = 0; it < 100; ++it) {
        double f = poly.evaluate(tau).real() - target;
        if (f > 0)
            hi = tau;
        else
            lo = tau;
        double df = poly.evaluate_derivative(tau).real();
        double next = df > 0 ? tau - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - tau) <= 1e-16 * std::max(tau, 1e-300) || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi)
            return next;
        tau = next;
    }
    return tau;
}

double wrap_angle(double a)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a > std::numbers::pi)
        a -= two_pi;
    else if (a <= -std::numbers::pi)
        a += two_pi;
    return a;
}

} // namespace lqd::detail
