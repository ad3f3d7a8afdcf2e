#include "lqd/qdiff.hpp"

#include "lqd/errors.hpp"

#include <cmath>
#include <numbers>

namespace lqd {

namespace {

constexpr double pi = std::numbers::pi;

cplx power_downward(cplx w, const Rational &e)
{
    if (e.denominator() == 1 && std::abs(e.numerator()) <= 16) {
        // Integer powers are branch free; use repeated multiplication for accuracy.
        cplx r = 1.0;
        for (std::int64_t k = 0; k < std::abs(e.numerator()); ++k)
            r *= w;
        return e.numerator() < 0 ? 1.0 / r : r;
    }
    return std::exp(to_double(e) * downward_log(w));
}

} // namespace

cplx downward_log(cplx w)
{
    double a = std::atan2(w.imag(), w.real());
    if (a < -pi / 2)
        a += 2 * pi;
    return {std::log(std::abs(w)), a};
}

double nearest_branch(double value, double reference)
{
    return value + 2 * pi * std::round((reference - value) / (2 * pi));
}

cplx nearest_branch(cplx log_value, cplx reference)
{
    return {log_value.real(), nearest_branch(log_value.imag(), reference.imag())};
}

FactorizedQD::FactorizedQD() : prefactor_(1.0) {}

FactorizedQD::FactorizedQD(cplx prefactor, std::vector<Factor> factors) : prefactor_(prefactor)
{
    if (prefactor == cplx(0.0) || !std::isfinite(prefactor.real()) || !std::isfinite(prefactor.imag()))
        fail(ErrorKind::domain, "quadratic differential prefactor must be finite and nonzero");
    for (auto &f : factors) {
        bool merged = false;
        for (auto &g : factors_) {
            if (g.loc == f.loc) {
                g.exponent += f.exponent;
                merged = true;
                break;
            }
        }
        if (!merged)
            factors_.push_back(f);
    }
    std::erase_if(factors_, [](const Factor &f) { return f.exponent.numerator() == 0; });
}

cplx FactorizedQD::evaluate(cplx z) const
{
    cplx value = prefactor_;
    for (const auto &f : factors_) {
        cplx d = z - f.loc;
        if (d == cplx(0.0)) {
            if (f.exponent.numerator() < 0)
                fail(ErrorKind::pole_hit, "evaluation at a pole of the quadratic differential");
            return 0.0;
        }
        value *= power_downward(d, f.exponent);
    }
    return value;
}

cplx FactorizedQD::log_evaluate(cplx z) const
{
    cplx acc = std::log(prefactor_);
    for (const auto &f : factors_) {
        cplx d = z - f.loc;
        if (d == cplx(0.0))
            fail(ErrorKind::degenerate, "log of the quadratic differential at a factor location");
        acc += to_double(f.exponent) * downward_log(d);
    }
    return acc;
}

cplx FactorizedQD::log_derivative(cplx z) const
{
    cplx acc = 0.0;
    for (const auto &f : factors_) {
        cplx d = z - f.loc;
        if (d == cplx(0.0))
            fail(ErrorKind::pole_hit, "log-derivative at a factor location");
        acc += to_double(f.exponent) / d;
    }
    return acc;
}

FactorizedQD FactorizedQD::rotate(double theta) const
{
    return FactorizedQD(prefactor_ * std::polar(1.0, -2 * theta), factors_);
}

std::pair<cplx, cplx> FactorizedQD::trajectory_tangents(cplx z, double phi) const
{
    cplx q = evaluate(z);
    if (q == cplx(0.0) || !std::isfinite(std::abs(q)))
        fail(ErrorKind::degenerate, "trajectory tangents requested at a zero or pole");
    cplx v = std::polar(1.0, phi - 0.5 * std::arg(q));
    return {v, -v};
}

Rational FactorizedQD::exponent_sum() const
{
    Rational s(0);
    for (const auto &f : factors_)
        s += f.exponent;
    return s;
}

Rational FactorizedQD::degree_at(cplx z) const
{
    for (const auto &f : factors_)
        if (f.loc == z)
            return f.exponent;
    return Rational(0);
}

cplx FactorizedQD::leading_coefficient(cplx z) const
{
    cplx value = prefactor_;
    for (const auto &f : factors_)
        if (f.loc != z)
            value *= power_downward(z - f.loc, f.exponent);
    return value;
}

bool FactorizedQD::is_factor_location(cplx z, double tol) const
{
    for (const auto &f : factors_)
        if (std::abs(f.loc - z) <= tol)
            return true;
    return false;
}

} // namespace lqd
