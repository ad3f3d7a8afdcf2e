#include "doctest.h"
#include "lqd/errors.hpp"
#include "lqd/multislit.hpp"

#include <cmath>
#include <numbers>

using namespace lqd;
using std::numbers::pi;

namespace {

std::vector<SlitStart> vertical_pair(double a, double b)
{
    return {{a, Rational(0), pi / 2, 0}, {b, Rational(0), pi / 2, 0}};
}

} // namespace

TEST_CASE("multi_rhs on the symmetric vertical pair is antisymmetric and repelling")
{
    MultiState sym;
    sym.xis = {-1, 1};
    sym.weights = {0.5, 0.5};
    sym.marks = {{-1.01, Rational(-1), MarkRole::base_minus}, {-0.99, Rational(-1), MarkRole::base_plus},
                 {0.99, Rational(-1), MarkRole::base_minus}, {1.01, Rational(-1), MarkRole::base_plus}};
    sym.owner = {0, 0, 1, 1};
    auto ds = multi_rhs(sym);
    CHECK(ds.xi_dots[0] == -ds.xi_dots[1]);
    CHECK(multi_constraint(sym) < 1e-15);

    // the sequential startup is symmetric up to O(s)
    auto st = multi_init(FactorizedQD(), vertical_pair(-1, 1), {0.5, 0.5}, 1e-6);
    auto d = multi_rhs(st);
    CHECK(std::abs(d.xi_dots[0] + d.xi_dots[1]) < 1e-6);
    CHECK(d.xi_dots[0] < 0);
    CHECK(d.xi_dots[1] > 0);
    CHECK(multi_constraint(st) < 1e-12);
}

TEST_CASE("single driver reduces to the chordal right-hand side")
{
    FactorizedQD qd(1.0, {{cplx(0.5, 1.0), Rational(-1)}, {cplx(0.5, -1.0), Rational(-1)}});
    auto ms = multi_init(qd, {{0.0, Rational(0), pi / 2, 0}}, {1.0}, 1e-6);
    auto cs = init_arc(qd, 0.0, Rational(0), pi / 2, 0, 1e-6);
    REQUIRE(ms.xis.size() == 1);
    CHECK(ms.xis[0] == cs.xi);
    auto dm = multi_rhs(ms);
    auto dc = rhs(cs);
    CHECK(dm.xi_dots[0] == dc.xi_dot);
    REQUIRE(dm.mark_dots.size() == dc.mark_dots.size());
    for (std::size_t i = 0; i < dm.mark_dots.size(); ++i)
        CHECK(dm.mark_dots[i] == dc.mark_dots[i]);
}

TEST_CASE("single-slit multi trace equals the chordal trace bit for bit")
{
    TraceConfig cfg;
    cfg.h = 1e-3;
    PathSegment seg;
    seg.phi = pi / 4;
    seg.stop = {StopCriterion::Kind::capacity, 0.2};
    auto ch = trace(FactorizedQD(), {0.3, Rational(0), 0}, {seg}, cfg);
    auto mu = multi_trace(FactorizedQD(), {{0.3, Rational(0), pi / 4, 0}}, std::vector<double>{1.0}, 0.2, cfg);
    REQUIRE(ch.samples.size() == mu.samples.size());
    bool same = true;
    for (std::size_t i = 0; i < ch.samples.size(); ++i)
        same = same && ch.samples[i].t == mu.samples[i].t && ch.samples[i].xi == mu.samples[i].xis[0];
    CHECK(same);
    CHECK(mu.stop_reason == StopReason::capacity_reached);
}

TEST_CASE("vertical pair stays antisymmetric and drifts outward")
{
    TraceConfig cfg;
    auto r = multi_trace(FactorizedQD(), vertical_pair(-1, 1), std::vector<double>{0.5, 0.5}, 1.0, cfg);
    REQUIRE(r.stop_reason == StopReason::capacity_reached);
    double worst = 0, worst_res = 0;
    bool monotone = true;
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const auto &s = r.samples[i];
        worst = std::max(worst, std::abs(s.xis[0] + s.xis[1]));
        worst_res = std::max(worst_res, s.residual);
        if (i > 0)
            monotone = monotone && s.xis[1] >= r.samples[i - 1].xis[1] && s.xis[0] <= r.samples[i - 1].xis[0];
    }
    CHECK(worst < 1e-8);
    CHECK(worst_res < 1e-6);
    CHECK(monotone);
    CHECK(r.samples.back().xis[1] > 1.0);
}

TEST_CASE("far-separated slits barely interact")
{
    auto r = multi_trace(FactorizedQD(), vertical_pair(-1e6, 1e6), std::vector<double>{0.5, 0.5}, 1.0);
    double worst = 0;
    for (const auto &s : r.samples)
        worst = std::max({worst, std::abs(s.xis[0] + 1e6), std::abs(s.xis[1] - 1e6)});
    CHECK(worst < 1e-4);
}

TEST_CASE("relabeling slits permutes the outputs")
{
    std::vector<SlitStart> a{{-1, Rational(0), pi / 2, 0}, {0.5, Rational(0), pi / 3, 0}};
    std::vector<SlitStart> b{a[1], a[0]};
    TraceConfig cfg;
    cfg.h = 1e-3;
    auto ra = multi_trace(FactorizedQD(), a, std::vector<double>{0.3, 0.7}, 0.1, cfg);
    auto rb = multi_trace(FactorizedQD(), b, std::vector<double>{0.7, 0.3}, 0.1, cfg);
    REQUIRE(ra.samples.size() == rb.samples.size());
    bool same = true;
    for (std::size_t i = 0; i < ra.samples.size(); ++i)
        same = same && ra.samples[i].xis[0] == rb.samples[i].xis[1] && ra.samples[i].xis[1] == rb.samples[i].xis[0];
    CHECK(same);
    CHECK(ra.startup_order == std::vector<int>{0, 1});
    CHECK(rb.startup_order == std::vector<int>{1, 0});
    CHECK(ra.samples.back().residual < 1e-6);
}

TEST_CASE("time-dependent weights keep the constraint")
{
    WeightFunction w = [](double t) {
        double b = 0.5 + 0.2 * std::sin(3 * t);
        return std::vector<double>{b, 1 - b};
    };
    auto r = multi_trace(FactorizedQD(), vertical_pair(-1, 1), w, 0.5);
    REQUIRE(r.stop_reason == StopReason::capacity_reached);
    double worst = 0;
    for (const auto &s : r.samples)
        worst = std::max(worst, s.residual);
    CHECK(worst < 1e-6);
    // slit 0 grows faster early on, so the pair is no longer symmetric
    CHECK(std::abs(r.samples.back().xis[0] + r.samples.back().xis[1]) > 1e-4);
}

TEST_CASE("multi input validation")
{
    CHECK_THROWS_AS(multi_init(FactorizedQD(), vertical_pair(-1, 1), {0.5, 0.6}, 1e-6), Error);
    CHECK_THROWS_AS(multi_init(FactorizedQD(), vertical_pair(1, 1), {0.5, 0.5}, 1e-6), Error);
    CHECK_THROWS_AS(multi_init(FactorizedQD(), {}, {}, 1e-6), Error);
    CHECK_THROWS_AS(multi_init(FactorizedQD(), {{0, Rational(0), pi / 2, 3}}, {1.0}, 1e-6), Error);
}
