#include "doctest.h"
#include "lqd/chordal.hpp"
#include "lqd/errors.hpp"

#include <cmath>
#include <numbers>

using namespace lqd;
using std::numbers::pi;

namespace {

ChordalState vertical_state(double t)
{
    ChordalState s;
    s.t = t;
    s.xi = 0;
    s.marks = {{-2 * std::sqrt(t), Rational(-1), MarkRole::base_minus}, {2 * std::sqrt(t), Rational(-1), MarkRole::base_plus}};
    s.sigma0 = 0;
    s.phi = pi / 2;
    s.tip = {0, 2 * std::sqrt(t)};
    s.arclength = 2 * std::sqrt(t);
    s.ambient = std::make_shared<FactorizedQD>();
    s.log_phi = log_phi_direct(s);
    s.log_q = 0;
    s.sign = 1;
    return s;
}

const MarkedPoint &find_role(const ChordalState &s, MarkRole r)
{
    for (auto it = s.marks.rbegin(); it != s.marks.rend(); ++it)
        if (it->role == r)
            return *it;
    throw std::runtime_error("role missing");
}

PathSegment up_to(double length, double phi = pi / 2, cplx heading = {0, 1})
{
    PathSegment seg;
    seg.phi = phi;
    seg.stop = {StopCriterion::Kind::arclength, length};
    seg.heading = heading;
    return seg;
}

} // namespace

TEST_CASE("rhs on the closed-form vertical slit")
{
    auto s = vertical_state(0.3);
    auto d = rhs(s);
    CHECK(d.xi_dot == 0.0);
    CHECK(std::abs(d.mark_dots[1] - 1 / std::sqrt(0.3)) < 1e-15);
    CHECK(std::abs(d.mark_dots[0] + 1 / std::sqrt(0.3)) < 1e-15);

    ChordalState one;
    one.xi = 0.2;
    one.marks = {{cplx(1.0, 0.5), Rational(3), MarkRole::interior}};
    auto d1 = rhs(one);
    cplx expect = -3.0 / (cplx(1.0, 0.5) - 0.2);
    CHECK(std::abs(d1.xi_dot - expect.real()) < 1e-15);
    CHECK(std::abs(d1.xi_dot_imag - expect.imag()) < 1e-15);

    one.marks[0].position = 0.2;
    CHECK_THROWS_AS(rhs(one), Error);
}

TEST_CASE("constraint residual")
{
    CHECK(constraint_residual(vertical_state(0.7)) < 1e-15);
}

TEST_CASE("taylor_step: Euler at order one, exact symmetry, convergence order")
{
    auto s = vertical_state(0.25);
    double h = 1e-3;
    auto e = taylor_step(s, h, 1);
    auto d = rhs(s);
    CHECK(std::abs(e.marks[1].position - (s.marks[1].position + h * d.mark_dots[1])) < 1e-15);
    CHECK(e.xi == 0.0);

    for (int m : {1, 2, 4}) {
        auto step_err = [&](double hh) {
            auto n = taylor_step(s, hh, m);
            CHECK(n.xi == 0.0);
            return std::abs(n.marks[1].position.real() - 2 * std::sqrt(s.t + hh));
        };
        double ratio = step_err(4e-3) / step_err(2e-3);
        CHECK(ratio == doctest::Approx(std::pow(2.0, m + 1)).epsilon(0.15));
    }
    auto tilted = init_arc(FactorizedQD(), 0, Rational(0), pi / 4, 0, 1e-6);
    CHECK_THROWS_AS(taylor_step(tilted, 1e-3, 4), Error);
}

TEST_CASE("init_arc: departure angles and base exponents")
{
    TraceConfig cfg;
    auto v = init_arc(FactorizedQD(), 0, Rational(0), pi / 2, 0, 1e-6, cfg);
    CHECK(find_role(v, MarkRole::base_plus).exponent == Rational(-1));
    CHECK(find_role(v, MarkRole::base_minus).exponent == Rational(-1));
    CHECK(std::abs(v.xi) < 1e-15);
    CHECK(std::abs(find_role(v, MarkRole::base_plus).position.real() - 2 * std::sqrt(1e-6)) < 1e-15);
    CHECK(std::abs(v.tip - cplx(0, 2e-3)) < 1e-15);
    CHECK(constraint_residual(v) < 1e-15);

    FactorizedQD corner(1.0, {{0.0, Rational(2)}, {-1.0, Rational(-1)}, {1.0, Rational(-1)}});
    auto angles = departure_angles(corner, 0, Rational(2), 0);
    REQUIRE(angles.size() == 2);
    CHECK(angles[0] == doctest::Approx(pi / 4));
    CHECK(angles[1] == doctest::Approx(3 * pi / 4));
    auto c = init_arc(corner, 0, Rational(2), 0, 0, 1e-6, cfg);
    CHECK(find_role(c, MarkRole::base_plus).exponent == Rational(-1));
    CHECK(find_role(c, MarkRole::base_minus).exponent == Rational(1));
    CHECK(constraint_residual(c) < 1e-8);

    FactorizedQD zq(1.0, {{0.0, Rational(1)}});
    auto za = departure_angles(zq, 0, Rational(1), 0);
    REQUIRE(za.size() == 1);
    CHECK(za[0] == doctest::Approx(2 * pi / 3));
    auto z = init_arc(zq, 0, Rational(1), 0, 0, 1e-6, cfg);
    CHECK(find_role(z, MarkRole::base_plus).exponent == Rational(0));
    CHECK(find_role(z, MarkRole::base_minus).exponent == Rational(-1));

    CHECK_THROWS_AS(init_arc(FactorizedQD(), 0, Rational(0), pi / 2, 1, 1e-6, cfg), Error);
    CHECK_THROWS_AS(init_arc(zq, 0, Rational(0), 0, 0, 1e-6, cfg), Error);
}

TEST_CASE("corner_turn exponent rules")
{
    TraceConfig cfg;
    auto s = init_arc(FactorizedQD(), 0, Rational(0), pi / 2, 0, 1e-6, cfg);
    s = taylor_step(s, 1e-4, 4);
    auto right = corner_turn(s, pi / 2, 0, cfg);
    CHECK(find_role(right, MarkRole::base_plus).exponent == Rational(-1));
    CHECK(find_role(right, MarkRole::base_minus).exponent == Rational(1));
    CHECK(right.n_current == Rational(2));
    int other = 0;
    for (const auto &m : right.marks)
        other += m.role == MarkRole::boundary_other;
    CHECK(other == 2);
    CHECK(constraint_residual(right) < 1e-8);
    CHECK(std::abs(tip_velocity(right) / std::abs(tip_velocity(right)) - cplx(1, 0)) < 1e-6);

    auto left = corner_turn(s, -pi / 2, 0, cfg);
    CHECK(find_role(left, MarkRole::base_plus).exponent == Rational(1));
    CHECK(find_role(left, MarkRole::base_minus).exponent == Rational(-1));

    auto straight = corner_turn(s, 0.0, pi / 2, cfg);
    CHECK(straight.marks.size() == s.marks.size());
    CHECK(straight.t == s.t);
}

TEST_CASE("tip velocity and loop guard on the vertical slit")
{
    auto s = vertical_state(0.09);
    cplx v = tip_velocity(s, FactorizedQD());
    CHECK(std::abs(v - cplx(0, 1 / 0.3)) < 1e-14);
    CHECK_FALSE(loop_guard(s, 1e4));
}

TEST_CASE("trace: vertical slit closed form")
{
    PathSegment seg;
    seg.phi = pi / 2;
    seg.stop = {StopCriterion::Kind::capacity, 1.0};
    auto r = trace(FactorizedQD(), {0, Rational(0), 0}, {seg});
    CHECK(r.stop_reason == StopReason::capacity_reached);
    const auto &last = r.samples.back();
    CHECK(last.t == 1.0);
    double worst = 0, worst_c = 0;
    for (const auto &row : r.samples) {
        worst = std::max(worst, std::abs(row.xi));
        worst_c = std::max(worst_c, std::abs(row.marks.back().position.real() - 2 * std::sqrt(row.t)));
    }
    CHECK(worst < 1e-8);
    CHECK(worst_c < 1e-8);
    CHECK(std::abs(last.tip - cplx(0, 2)) < 1e-8);
    CHECK(std::abs(last.arclength - 2) < 1e-8);
}

TEST_CASE("trace: vertical unit segment has capacity time 1/4")
{
    auto r = trace(FactorizedQD(), {0, Rational(0), -1}, {up_to(1.0)});
    CHECK(r.stop_reason == StopReason::length_reached);
    CHECK(std::abs(r.samples.back().t - 0.25) < 1e-9);
    CHECK(std::abs(r.samples.back().arclength - 1.0) < 1e-12);
}

TEST_CASE("trace: L path corners and invariants")
{
    std::vector<PathSegment> segs = {up_to(1), up_to(2, 0, {1, 0}), up_to(1)};
    auto r = trace(FactorizedQD(), {0, Rational(0), -1}, segs);
    CHECK(r.stop_reason == StopReason::length_reached);
    REQUIRE(r.corners.size() == 2);
    CHECK(std::abs(r.corners[0].t - 0.25) < 1e-6);
    auto ex = r.corners[0].exponents;
    std::sort(ex.begin(), ex.end());
    CHECK(ex == std::vector<Rational>{Rational(-1), Rational(-1), Rational(-1), Rational(1), Rational(2)});
    CHECK(std::abs(r.corners[0].delta - pi / 2) < 1e-12);
    CHECK(std::abs(r.corners[1].delta + pi / 2) < 1e-12);
    CHECK(std::abs(r.samples.back().tip - cplx(2, 2)) < 1e-3);
    for (const auto &row : r.samples) {
        CHECK(row.residual < 1e-6);
        CHECK(std::abs(row.traj_defect) < 1e-6);
        Rational sum(2);
        for (const auto &m : row.marks)
            sum += m.exponent;
        CHECK(sum == Rational(0));
    }
}

TEST_CASE("trace: tilted slit driving law")
{
    double p = 0.25;
    PathSegment seg;
    seg.phi = pi * p;
    seg.stop = {StopCriterion::Kind::capacity, 1.0};
    seg.heading = std::polar(1.0, pi * p);
    auto r = trace(FactorizedQD(), {0, Rational(0), -1}, {seg});
    double num = 0, den = 0;
    for (const auto &row : r.samples) {
        num += row.xi * std::sqrt(row.t);
        den += row.t;
    }
    double c = num / den;
    CHECK(std::abs(c - 4 / std::sqrt(3.0)) / c < 1e-4);
    for (std::size_t i = 1; i < r.samples.size(); ++i) {
        const auto &a = r.samples[i - 1];
        const auto &b = r.samples[i];
        CHECK(b.t > a.t);
        CHECK(b.arclength >= a.arclength);
    }
}
