#include "lqd/slitmaps.hpp"

#include "lqd/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace lqd {

namespace {

constexpr double pi = std::numbers::pi;

// log(1+u) for small complex u without cancellation in the real part.
cplx log1p_small(cplx u)
{
    double re = 0.5 * std::log1p(2 * u.real() + std::norm(u));
    double im = std::atan2(u.imag(), 1 + u.real());
    return {re, im};
}

} // namespace

TiltedSlitMap::TiltedSlitMap(double p, double x, double t_raw) : p_(p), x_(x), t_raw_(t_raw), s_(std::sqrt(t_raw)) {}

TiltedSlitMap TiltedSlitMap::make(double p, double x, double hcap)
{
    if (!(p > 0 && p < 1))
        fail(ErrorKind::domain, "slit angle parameter must lie in (0,1)");
    if (!(hcap > 0) || !std::isfinite(hcap))
        fail(ErrorKind::domain, "slit capacity must be positive");
    if (!std::isfinite(x))
        fail(ErrorKind::domain, "slit base must be finite");
    return TiltedSlitMap(p, x, hcap / (2 * lambda(p)));
}

Landmarks TiltedSlitMap::landmarks() const
{
    return {x_ - p_ * s_, x_ + (1 - 2 * p_) * s_, x_ + (1 - p_) * s_};
}

cplx TiltedSlitMap::tip() const
{
    double len = s_ * std::pow(p_, p_) * std::pow(1 - p_, 1 - p_);
    return x_ + std::polar(len, pi * p_);
}

cplx TiltedSlitMap::apply_upper(cplx z) const
{
    const double a = x_ - p_ * s_;
    const double b = x_ + (1 - p_) * s_;
    cplx zb = z - b;
    cplx za = z - a;
    if (zb == cplx(0.0) || za == cplx(0.0))
        return x_;
    if (std::abs(z - x_) > 4 * s_) {
        // Far field: F - x = (z-b) (1 + s/(z-b))^(1-p), accurate for the 1/z tail.
        return zb * std::exp((1 - p_) * log1p_small(s_ / zb)) + x_;
    }
    return std::exp(p_ * downward_log(zb) + (1 - p_) * downward_log(za)) + x_;
}

cplx TiltedSlitMap::apply(cplx z) const
{
    if (z.imag() < 0)
        return std::conj(apply_upper(std::conj(z)));
    return apply_upper(z);
}

cplx TiltedSlitMap::derivative(cplx z) const
{
    const double a = x_ - p_ * s_;
    const double b = x_ + (1 - p_) * s_;
    return (apply(z) - x_) * (p_ / (z - b) + (1 - p_) / (z - a));
}

cplx TiltedSlitMap::second_derivative(cplx z) const
{
    const double a = x_ - p_ * s_;
    const double b = x_ + (1 - p_) * s_;
    cplx l = p_ / (z - b) + (1 - p_) / (z - a);
    cplx dl = -p_ / ((z - b) * (z - b)) - (1 - p_) / ((z - a) * (z - a));
    return (apply(z) - x_) * (l * l + dl);
}

void TiltedSlitMap::value_and_derivative(cplx z, cplx &value, cplx &deriv) const
{
    const double a = x_ - p_ * s_;
    const double b = x_ + (1 - p_) * s_;
    value = apply(z);
    deriv = (value - x_) * (p_ / (z - b) + (1 - p_) / (z - a));
}

cplx TiltedSlitMap::newton(cplx w, cplx z, const NewtonOptions &opt, bool &ok) const
{
    const double scale = std::max(1.0, std::abs(w - x_));
    ok = false;
    cplx f, d;
    for (int it = 0; it < opt.max_iter; ++it) {
        value_and_derivative(z, f, d);
        cplx r = f - w;
        if (std::abs(r) <= opt.tol * scale) {
            ok = true;
            return z;
        }
        if (d == cplx(0.0) || !std::isfinite(std::abs(d)))
            return z;
        cplx step = r / d;
        cplx next = z - step;
        int halvings = 0;
        while (next.imag() < 0 && halvings < 40) {
            step *= 0.5;
            next = z - step;
            ++halvings;
        }
        if (next.imag() < 0)
            next.imag(0.0);
        if (next == z) {
            // Stalled at roundoff: accept if the residual is near the target.
            ok = std::abs(r) <= 1e3 * opt.tol * scale;
            return z;
        }
        z = next;
    }
    ok = std::abs(apply(z) - w) <= opt.tol * scale;
    return z;
}

cplx TiltedSlitMap::invert(cplx w, cplx guess, const NewtonOptions &opt) const
{
    if (w.imag() < 0)
        return std::conj(invert(std::conj(w), std::conj(guess), opt));
    if (guess.imag() < 0)
        guess = std::conj(guess);

    const double a = x_ - p_ * s_;
    const double b = x_ + (1 - p_) * s_;
    const double zc = x_ + (1 - 2 * p_) * s_;

    if (std::abs(w - x_) > 16 * s_) {
        // Far from the slit the hydrodynamic expansion is an excellent start.
        bool ok = false;
        cplx z = newton(w, w + capacity() / (w - x_), opt, ok);
        if (ok && z.imag() >= 0)
            return z;
    }

    std::array<cplx, 7> starts{};
    std::size_t n = 0;
    starts[n++] = guess;
    if (w != cplx(x_))
        starts[n++] = w + capacity() / (w - x_);
    {
        // Square-root chart at the critical point.
        cplx f2 = second_derivative(cplx(zc, 0.0));
        cplx root = std::sqrt(2.0 * (w - tip()) / f2);
        starts[n++] = zc + (root.imag() >= 0 ? root : -root);
    }
    {
        // Power charts at the two real roots.
        cplx d = w - x_;
        double r = std::abs(d);
        double alpha = std::arg(d);
        if (alpha < 0)
            alpha = 0;
        if (r == 0.0 || alpha <= pi * p_ + 1e-12)
            starts[n++] = b + std::polar(std::pow(r / std::pow(s_, 1 - p_), 1 / p_), alpha / p_);
        if (r == 0.0 || alpha >= pi * p_ - 1e-12)
            starts[n++] = a + std::polar(std::pow(r / std::pow(s_, p_), 1 / (1 - p_)), (alpha - pi * p_) / (1 - p_));
    }
    {
        std::array<std::pair<double, cplx>, 7> ranked{};
        for (std::size_t i = 0; i < n; ++i)
            ranked[i] = {std::abs(apply(starts[i]) - w), starts[i]};
        std::stable_sort(ranked.begin(), ranked.begin() + n,
                         [](const auto &u, const auto &v) { return u.first < v.first; });
        for (std::size_t i = 0; i < n; ++i)
            starts[i] = ranked[i].second;
    }

    bool ok = false;
    cplx z{};
    for (std::size_t i = 0; i < n && !ok; ++i)
        z = newton(w, starts[i], opt, ok);
    if (!ok)
        fail(ErrorKind::no_convergence, "Newton inversion of the slit map did not converge");
    if (z.imag() < -1e-12)
        fail(ErrorKind::branch, "slit map inversion left the upper half-plane");

    // Points on the slit have a preimage on each side of the critical point.
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)) && z.real() >= a - 1e-12 * s_ && z.real() <= b + 1e-12 * s_) {
        double other_start = z.real() < zc ? zc + (zc - z.real()) * (b - zc) / (zc - a)
                                           : zc - (z.real() - zc) * (zc - a) / (b - zc);
        starts[n++] = cplx(other_start, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            bool ok2 = false;
            cplx z2 = newton(w, starts[i], opt, ok2);
            if (ok2 && z2.imag() >= -1e-12 && std::abs(z2 - guess) < std::abs(z - guess))
                z = z2;
        }
    }
    return z;
}

} // namespace lqd
