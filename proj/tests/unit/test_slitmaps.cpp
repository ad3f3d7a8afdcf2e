#include "doctest.h"
#include "lqd/errors.hpp"
#include "lqd/slitmaps.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lqd;
using std::numbers::pi;

namespace {

// -C from the 1/z coefficient of F(z) - z, by the trapezoid rule on a circle around the slit.
double contour_capacity(const TiltedSlitMap &f, double radius, int n = 512)
{
    cplx acc = 0;
    for (int k = 0; k < n; ++k) {
        cplx z = f.x() + std::polar(radius, 2 * pi * (k + 0.5) / n);
        acc += (f.apply(z) - z) * (z - f.x());
    }
    return -(acc / static_cast<double>(n)).real();
}

} // namespace

TEST_CASE("capacity calibration matches the contour-integral oracle")
{
    for (double p : {0.5, 0.25, 1.0 / 3, 2.0 / 3, 0.9}) {
        auto f = TiltedSlitMap::make(p, 0.3, 0.7);
        double measured = contour_capacity(f, 20 * f.scale());
        CHECK(std::abs(measured - 0.7) < 1e-12);
    }
    // lambda(1/2) from the oracle: capacity / (2 t_raw)
    auto half = TiltedSlitMap::make(0.5, 0, 1.0);
    CHECK(std::abs(contour_capacity(half, 10 * half.scale()) / (2 * half.t_raw()) - 1.0 / 16) < 1e-14);
    CHECK(TiltedSlitMap::lambda(0.5) == 1.0 / 16);
}

TEST_CASE("p=1/2, hcap=1/2 is sqrt(z^2-1)")
{
    auto f = TiltedSlitMap::make(0.5, 0.0, 0.5);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 40; ++i) {
        cplx z{u(rng), std::abs(u(rng)) + 1e-3};
        cplx oracle = z * std::sqrt(1.0 - 1.0 / (z * z));
        CHECK(std::abs(f.apply(z) - oracle) < 1e-13);
    }
    CHECK(std::abs(f.tip() - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(f.apply(f.landmarks().tip_preimage) - cplx(0, 1)) < 1e-15);
    auto shifted = TiltedSlitMap::make(0.5, 2.0, 0.5);
    CHECK(std::abs(shifted.apply({2.5, 0.5}) - (2.0 + f.apply({0.5, 0.5}))) < 1e-14);
}

TEST_CASE("landmarks")
{
    auto f = TiltedSlitMap::make(0.5, 0, 0.25);
    double s = f.scale();
    auto l = f.landmarks();
    CHECK(std::abs(l.c_minus + s / 2) < 1e-15);
    CHECK(l.tip_preimage == 0.0);
    CHECK(std::abs(l.c_plus - s / 2) < 1e-15);
    auto g = TiltedSlitMap::make(0.25, 0, 0.25);
    double sg = g.scale();
    auto lg = g.landmarks();
    CHECK(std::abs(lg.c_minus + sg / 4) < 1e-15);
    CHECK(std::abs(lg.tip_preimage - sg / 2) < 1e-15);
    CHECK(std::abs(lg.c_plus - 3 * sg / 4) < 1e-15);
    for (double p = 0.01; p < 1; p += 0.07) {
        auto m = TiltedSlitMap::make(p, -0.4, 0.3);
        auto lm = m.landmarks();
        CHECK(lm.c_minus < lm.tip_preimage);
        CHECK(lm.tip_preimage < lm.c_plus);
        CHECK(std::abs(m.apply(lm.c_minus) - cplx(-0.4)) < 1e-14);
        CHECK(std::abs(m.apply(lm.c_plus) - cplx(-0.4)) < 1e-14);
        CHECK(std::abs(m.derivative(lm.tip_preimage)) < 1e-12);
        CHECK(std::abs(m.apply(lm.tip_preimage) - m.tip()) < 1e-14);
        CHECK(std::abs(std::arg(m.tip() + 0.4) - pi * p) < 1e-13);
    }
}

TEST_CASE("hydrodynamic expansion at |z| = 1e6")
{
    for (double p : {0.2, 0.5, 0.8}) {
        double hcap = 0.9;
        auto f = TiltedSlitMap::make(p, 0.1, hcap);
        for (double a : {0.1, 1.0, 2.0, 3.0}) {
            cplx z = std::polar(1e6, a);
            CHECK(std::abs(f.apply(z) - z + hcap / z) < 1e-6 * hcap);
        }
    }
    auto f = TiltedSlitMap::make(0.5, 0, 1.0);
    double s = f.scale();
    cplx z{1e3, 2e3};
    CHECK(std::abs(f.apply(z) - (z - (s * s / 8) / z)) < 1e-9);
}

TEST_CASE("invert round trip and branch cases")
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2, 2), v(0.1, 2);
    for (double p : {0.25, 0.5, 0.7}) {
        auto f = TiltedSlitMap::make(p, 0.2, 0.3);
        for (int i = 0; i < 200; ++i) {
            cplx z0{u(rng), v(rng)};
            cplx w = f.apply(z0);
            cplx z = f.invert(w, w);
            CHECK(std::abs(z - z0) < 1e-12);
        }
        // near the tip
        auto l = f.landmarks();
        cplx z0{l.tip_preimage + 1e-4, 1e-4};
        CHECK(std::abs(f.invert(f.apply(z0), f.tip()) - z0) < 1e-10);
        // lower half-plane by reflection
        cplx zl{0.3, -0.5};
        CHECK(std::abs(f.invert(f.apply(zl), 0.0) - zl) < 1e-12);
        // real points outside the base stay real
        cplx zr = f.invert(3.0, 3.0);
        CHECK(std::abs(zr.imag()) < 1e-14);
        CHECK(std::abs(f.apply(zr) - 3.0) < 1e-12);
    }
    auto g = TiltedSlitMap::make(0.5, 0, 1.0);
    double s = g.scale();
    CHECK(std::abs(g.invert(0.0, {0.1, 0.01}) - s / 2) < 1e-12);
    CHECK(std::abs(g.invert(0.0, {-0.1, 0.01}) + s / 2) < 1e-12);
    cplx far{1e4, 3e4};
    CHECK(std::abs(g.invert(far, far) - (far + g.capacity() / far)) < 1e-7);
}

TEST_CASE("make validates arguments")
{
    CHECK_THROWS_AS(TiltedSlitMap::make(0.0, 0, 1), Error);
    CHECK_THROWS_AS(TiltedSlitMap::make(1.0, 0, 1), Error);
    CHECK_THROWS_AS(TiltedSlitMap::make(0.5, 0, 0), Error);
}
