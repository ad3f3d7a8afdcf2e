#include "lqd/rational.hpp"

#include "lqd/errors.hpp"

#include <charconv>
#include <cmath>

namespace lqd {

namespace {

std::int64_t parse_int(const std::string &s)
{
    std::int64_t v = 0;
    auto first = s.data();
    auto last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        fail(ErrorKind::parse, "not an integer: '" + s + "'");
    return v;
}

} // namespace

Rational parse_rational(const std::string &text)
{
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        auto den = parse_int(text.substr(slash + 1));
        if (den == 0)
            fail(ErrorKind::parse, "zero denominator in '" + text + "'");
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    if (text.find_first_of(".eE") == std::string::npos)
        return Rational(parse_int(text));
    double x = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail(ErrorKind::parse, "not a rational: '" + text + "'");
    return best_rational(x);
}

std::string format_rational(const Rational &r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational &r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Rational best_rational(double x, std::int64_t max_den)
{
    if (!std::isfinite(x))
        fail(ErrorKind::domain, "cannot approximate a non-finite value by a rational");
    // Convergents h/k of the continued fraction of x; stop at the denominator bound
    // or when the convergent reproduces x to double precision.
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double rem = x;
    for (int i = 0; i < 64; ++i) {
        double a = std::floor(rem);
        if (std::abs(a) > 9.0e15)
            break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t h2 = ai * h1 + h0;
        std::int64_t k2 = ai * k1 + k0;
        if (k2 > max_den)
            break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = rem - a;
        if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 4e-16 * std::max(1.0, std::abs(x))
            || frac < 1e-15)
            break;
        rem = 1.0 / frac;
    }
    if (k1 == 0)
        return Rational(static_cast<std::int64_t>(std::llround(x)));
    return Rational(h1, k1);
}

} // namespace lqd
