#include "doctest.h"
#include "lqd/errors.hpp"
#include "lqd/oracle.hpp"
#include "lqd/radial.hpp"

#include <cmath>
#include <numbers>

using namespace lqd;
using std::numbers::pi;

namespace {

// Q = z^-2: radius slits and log-spirals are trajectories
FactorizedQD pole_at_origin() { return FactorizedQD(1.0, {{cplx(0.0), Rational(-2)}}); }

double sup_vs_oracle(const RadialTraceResult &r, const std::vector<RadialOracleSample> &o)
{
    double worst = 0;
    std::size_t j = 0;
    for (const auto &os : o) {
        while (j + 1 < r.samples.size() && r.samples[j + 1].t < os.t)
            ++j;
        if (j + 1 >= r.samples.size())
            break;
        const auto &a = r.samples[j];
        const auto &b = r.samples[j + 1];
        double w = (os.t - a.t) / (b.t - a.t);
        worst = std::max(worst, std::abs(a.xi * (1 - w) + b.xi * w - os.xi));
    }
    return worst;
}

DiscPolyline spiral(double phi, double end_radius, int pieces)
{
    DiscPolyline path;
    double len = -std::log(end_radius) / std::cos(phi);
    for (int k = 0; k <= pieces; ++k)
        path.vertices.push_back(std::exp(-len * k / pieces * std::polar(1.0, phi)));
    return path;
}

} // namespace

TEST_CASE("circle mark closed form")
{
    for (double phi : {0.5, 1.7, 3.0, -2.2}) {
        RadialState st;
        st.origin_degree = -2;
        st.marks = {{std::polar(1.0, phi), Rational(-2), MarkRole::boundary_other}};
        auto d = radial_rhs(st);
        CHECK(d.xi_dot == doctest::Approx(1 / std::tan(phi / 2)).epsilon(1e-13));
        CHECK(std::abs(d.xi_dot_imag) < 1e-13);
        // the mark slides along the circle
        cplx p = st.marks[0].position;
        CHECK(std::abs((std::conj(p) * d.mark_dots[0]).real()) < 1e-13);
    }
}

TEST_CASE("without marks the driving speed is purely imaginary")
{
    RadialState st;
    st.xi = 0.4;
    auto d = radial_rhs(st);
    CHECK(d.xi_dot == doctest::Approx(0.0));
    CHECK(d.xi_dot_imag == doctest::Approx(3.0));
    auto p = radial_rhs(st, RadialMode::as_printed);
    CHECK(p.xi_dot_imag == doctest::Approx(1.0));
}

TEST_CASE("radius slit startup is real and balanced")
{
    auto st = radial_init(pole_at_origin(), {0.0, Rational(0), 0.0, 0}, 1e-6);
    CHECK(st.origin_degree == -2);
    REQUIRE(st.marks.size() == 2);
    auto d = radial_rhs(st);
    CHECK(std::abs(d.xi_dot) < 1e-6);
    CHECK(std::abs(d.xi_dot_imag) < 1e-6);
    CHECK(radial_constraint(st).residual < 1e-9);
    // printed form misses the origin term
    CHECK(radial_rhs(st, RadialMode::as_printed).xi_dot_imag == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(st.tip) < 1);
    CHECK(std::abs(st.tip) > 0.99);
}

TEST_CASE("radius slit trace matches the oracle and the exact conformal radius")
{
    auto r = radial_trace(pole_at_origin(), {0.0, Rational(0), 0.0, 0}, {StopCriterion::Kind::capacity, 0.5});
    REQUIRE(r.stop_reason == StopReason::capacity_reached);
    CHECK(r.samples.back().t == doctest::Approx(0.5).epsilon(1e-14));
    double worst_xi = 0, worst_radius = 0, worst_res = 0;
    for (const auto &s : r.samples) {
        worst_xi = std::max(worst_xi, std::abs(s.xi));
        double rad = std::abs(s.tip);
        worst_radius = std::max(worst_radius, std::abs(std::exp(-s.t) - 4 * rad / ((1 + rad) * (1 + rad))));
        worst_res = std::max(worst_res, s.residual);
    }
    CHECK(worst_xi < 1e-6);
    CHECK(worst_radius < 1e-6);
    CHECK(worst_res < 1e-6);
    // printed-mode defect is |e^{Kt} - 1| on this state
    CHECK(r.samples.back().alt_modulus_defect == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-6));

    auto o = radial_polyline_driving(spiral(0.0, std::abs(r.samples.back().tip), 50), 4);
    CHECK(sup_vs_oracle(r, o) < 1e-8);
}

TEST_CASE("log-spiral agrees with the oracle and flips with the tilt")
{
    auto r = radial_trace(pole_at_origin(), {0.0, Rational(0), pi / 8, 0}, {StopCriterion::Kind::capacity, 0.3});
    REQUIRE(r.stop_reason == StopReason::capacity_reached);
    auto m = radial_trace(pole_at_origin(), {0.0, Rational(0), -pi / 8, 0}, {StopCriterion::Kind::capacity, 0.3});
    REQUIRE(m.samples.size() == r.samples.size());
    CHECK(r.samples.back().xi < -0.1);
    CHECK(m.samples.back().xi == doctest::Approx(-r.samples.back().xi).epsilon(1e-10));

    double end = std::abs(r.samples.back().tip);
    // the tip stays on the spiral
    double off = 0;
    for (const auto &s : r.samples) {
        cplx lg = std::log(s.tip);
        off = std::max(off, std::abs(lg.imag() - lg.real() * std::tan(pi / 8)));
    }
    CHECK(off < 1e-6);

    double coarse = sup_vs_oracle(r, radial_polyline_driving(spiral(pi / 8, end, 100), 4));
    double fine = sup_vs_oracle(r, radial_polyline_driving(spiral(pi / 8, end, 400), 4));
    CHECK(fine < 2e-4);
    CHECK(fine < 0.5 * coarse);
}

TEST_CASE("rotating the base point rotates the driving function")
{
    RadialConfig cfg;
    cfg.trace.h = 1e-3;
    StopCriterion stop{StopCriterion::Kind::capacity, 0.2};
    auto a = radial_trace(pole_at_origin(), {0.0, Rational(0), pi / 6, 0}, stop, cfg);
    auto b = radial_trace(pole_at_origin(), {0.9, Rational(0), pi / 6, 0}, stop, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    double worst = 0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        worst = std::max({worst, std::abs(b.samples[i].xi - a.samples[i].xi - 0.9),
                          std::abs(b.samples[i].tip - a.samples[i].tip * std::polar(1.0, 0.9))});
    CHECK(worst < 1e-9);
}

TEST_CASE("radial input validation")
{
    CHECK_THROWS_AS(radial_init(FactorizedQD(1.0, {{cplx(0.0), Rational(-3, 2)}}), {0.0, Rational(0), 0.0, 0}, 1e-6),
                    Error);
    CHECK_THROWS_AS(radial_init(pole_at_origin(), {0.0, Rational(1), 0.0, 0}, 1e-6), Error);
    CHECK_THROWS_AS(radial_init(pole_at_origin(), {0.0, Rational(0), 0.0, 5}, 1e-6), Error);
    CHECK_THROWS_AS(radial_init(pole_at_origin(), {0.0, Rational(0), 0.0, 0}, -1), Error);
}
