#include "doctest.h"
#include "lqd/errors.hpp"
#include "lqd/io.hpp"
#include "lqd/job.hpp"

#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>

using namespace lqd;
using std::numbers::pi;

namespace {

ErrorKind parse_error_kind(const std::string &text)
{
    try {
        parse_job(text);
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("job parsed: " << text);
    return ErrorKind::domain;
}

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("format_double round-trips")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-1, 1);
    std::uniform_int_distribution<int> ex(-300, 300);
    for (int k = 0; k < 5000; ++k) {
        double x = std::ldexp(mant(rng), ex(rng));
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(0.0) == "0");
}

TEST_CASE("qd JSON round-trip keeps exact exponents")
{
    FactorizedQD qd(cplx(2, -1), {{cplx(0.5, 1), Rational(-1, 3)}, {cplx(-1, 0), Rational(2)}});
    auto back = parse_qd_json(qd_to_json(qd));
    CHECK(back.prefactor() == qd.prefactor());
    REQUIRE(back.factors().size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.factors()[i].loc == qd.factors()[i].loc);
        CHECK(back.factors()[i].exponent == qd.factors()[i].exponent);
    }
}

TEST_CASE("job parsing")
{
    auto job = parse_job(R"({"segments":[{"phi_over_pi":"1/2","length":1,"heading":[0,1]},
                                          {"phi":0,"capacity":0.5,"turn":"right"}],
                             "config":{"h":2e-4,"order":6,"tol_newton":1e-12}})");
    REQUIRE(job.segments.size() == 2);
    CHECK(job.segments[0].phi == pi / 2);
    CHECK(job.segments[0].stop.kind == StopCriterion::Kind::arclength);
    CHECK(job.segments[1].stop.kind == StopCriterion::Kind::capacity);
    CHECK(job.segments[1].turn == TurnHint::right);
    CHECK(job.config.h == 2e-4);
    CHECK(job.config.order == 6);
    CHECK(job.config.newton.tol == 1e-12);

    auto lat = parse_job(R"({"lattice":{"kind":"square","spacing":1,"origin":0.5,"moves":["U",0,"U"]}})");
    CHECK(lat.start.xi0 == 0.5);
    REQUIRE(lat.polyline);
    CHECK(lat.polyline->vertices.back() == cplx(1.5, 2));

    auto multi = parse_job(R"({"multi":{"slits":[{"xi0":-1},{"xi0":1}],"capacity":1}})");
    CHECK(multi.weights == std::vector<double>{0.5, 0.5});
    CHECK(multi.slits[0].phi == pi / 2);

    auto rad = parse_job(R"({"radial":{"xi0":0.3,"phi_over_pi":0.125,"length":0.2,"mode":"as_printed"}})");
    CHECK(rad.radial_mode == RadialMode::as_printed);
    CHECK(rad.radial_stop.kind == StopCriterion::Kind::arclength);
    CHECK(rad.radial.phi == doctest::Approx(pi / 8));

    CHECK(parse_error_kind("{") == ErrorKind::parse);
    CHECK(parse_error_kind("[1,2]") == ErrorKind::parse);
    CHECK(parse_error_kind(R"({"segments":[{"length":1}]})") == ErrorKind::parse);
    CHECK(parse_error_kind(R"({"segments":[{"phi":0,"length":1,"capacity":1}]})") == ErrorKind::parse);
    CHECK(parse_error_kind(R"({"qd":{"factors":[{"loc":[0,1]}]}})") == ErrorKind::parse);
    CHECK(parse_error_kind(R"({"lattice":{"kind":"square","moves":["U"]},"polyline":[[0,0],[0,1]]})") ==
          ErrorKind::parse);
    CHECK(parse_error_kind(R"({"lattice":{"kind":"square","moves":["R"]}})") == ErrorKind::boundary_exit);
    CHECK(parse_error_kind(R"({"radial":{"capacity":1,"mode":"sideways"}})") == ErrorKind::parse);
    CHECK(parse_error_kind(R"({"config":{"order":"four"}})") == ErrorKind::parse);
}

TEST_CASE("chordal CSV layout")
{
    auto job = parse_job(R"({"lattice":{"kind":"square","moves":["U","R"]},"config":{"h":1e-3}})");
    auto out = run_job(job, Command::trace);
    std::ostringstream a, b;
    write_csv(a, out);
    write_csv(b, run_job(job, Command::trace));
    CHECK(a.str() == b.str());

    auto rows = lines(a.str());
    REQUIRE(rows.size() == out.trace.samples.size() + 1);
    CHECK(rows[0].rfind("t,xi,gamma_re,gamma_im,arclength,residual,mark0_re,mark0_im,mark0_exp,", 0) == 0);
    CHECK(rows[0].substr(rows[0].size() - 12) == ",stop_reason");
    CHECK(rows[1].back() == ',');
    CHECK(rows.back().substr(rows.back().size() - 15) == ",length_reached");
    // one more mark group after the corner than at the start
    auto commas = [](const std::string &s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(commas(rows[1]) == commas(rows[0]));
    CHECK(commas(rows.back()) == commas(rows[0]));
}

TEST_CASE("multi, radial and oracle CSV headers")
{
    auto multi = run_job(parse_job(R"({"multi":{"slits":[{"xi0":-1},{"xi0":1}],"capacity":0.05}})"), Command::multi);
    std::ostringstream m;
    write_csv(m, multi);
    CHECK(lines(m.str())[0].rfind("t,xi1,xi2,residual,", 0) == 0);

    auto rad = run_job(parse_job(R"({"qd":{"factors":[{"loc":[0,0],"exp":"-2"}]},"radial":{"capacity":0.05}})"),
                       Command::radial);
    std::ostringstream r;
    write_csv(r, rad);
    auto head = lines(r.str())[0];
    CHECK(head.rfind("t,xi,tip_re,tip_im,residual_mora,modulus_defect,mark0_re", 0) == 0);
    CHECK(head.find("alt_residual_mora,alt_modulus_defect") != std::string::npos);

    auto orc = run_job(parse_job(R"({"polyline":[[0,0],[0,1]],"oracle":{"n_subdiv":4}})"), Command::oracle);
    std::ostringstream o;
    write_csv(o, orc);
    CHECK(lines(o.str())[0] == "t,xi,gamma_re,gamma_im,arclength,residual,stop_reason");

    std::ostringstream svg;
    write_svg(svg, orc);
    CHECK(svg.str().rfind("<svg", 0) == 0);
    CHECK(svg.str().find("<polyline") != std::string::npos);
}

TEST_CASE("check command on the vertical slit")
{
    auto job = parse_job(R"({"polyline":[[0,0],[0,1]],"check":{"tolerance":1e-6},"oracle":{"n_subdiv":16}})");
    auto out = run_job(job, Command::check);
    CHECK(out.deviation < 1e-10);
    CHECK(run_completed(out));
    CHECK(stop_reason_of(out) == "length_reached");
    // the oracle needs a straight path
    CHECK_THROWS_AS(run_job(parse_job(R"({"segments":[{"phi":0.3,"length":1}]})"), Command::oracle), Error);
}
