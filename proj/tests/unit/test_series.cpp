#include "doctest.h"
#include "lqd/series.hpp"

#include <cmath>

using namespace lqd;
using c = std::complex<double>;

namespace {

Series from(std::initializer_list<c> coeffs)
{
    Series s(coeffs.size() - 1);
    std::size_t k = 0;
    for (c v : coeffs)
        s[k++] = v;
    return s;
}

} // namespace

TEST_CASE("series arithmetic matches hand expansions")
{
    auto a = from({1, 2, 0, 0});  // 1 + 2t
    auto b = from({1, -1, 0, 0}); // 1 - t
    auto p = a * b;               // 1 + t - 2t^2
    CHECK(p[0] == c(1));
    CHECK(p[1] == c(1));
    CHECK(p[2] == c(-2));
    CHECK(p[3] == c(0));
    auto r = reciprocal(b); // 1 + t + t^2 + t^3
    for (std::size_t k = 0; k <= 3; ++k)
        CHECK(std::abs(r[k] - c(1)) < 1e-15);
    auto q = a / b; // (1+2t)(1+t+t^2+...) = 1 + 3t + 3t^2 + 3t^3
    CHECK(std::abs(q[3] - c(3)) < 1e-15);
}

TEST_CASE("exp and log are inverse and match Taylor coefficients")
{
    auto t = from({0, 1, 0, 0, 0, 0});
    auto e = exp(t);
    double fact = 1;
    for (std::size_t k = 0; k <= 5; ++k) {
        if (k > 0)
            fact *= static_cast<double>(k);
        CHECK(std::abs(e[k] - c(1.0 / fact)) < 1e-15);
    }
    auto x = from({c(0.3, 0.2), c(1, -1), c(0.5), c(0, 2), c(-1), c(0.25)});
    auto y = log(exp(x), x[0]);
    for (std::size_t k = 0; k <= 5; ++k)
        CHECK(std::abs(y[k] - x[k]) < 1e-13);
}

TEST_CASE("integrate and evaluate")
{
    auto a = from({1, 2, 3});
    auto i = integrate(a, 5.0);
    CHECK(i[0] == c(5));
    CHECK(i[1] == c(1));
    CHECK(i[2] == c(1));
    CHECK(std::abs(a.evaluate(2.0) - c(17)) < 1e-15);
    CHECK(std::abs(a.evaluate_derivative(2.0) - c(14)) < 1e-15);
    auto re = real_part(from({c(1, 2), c(3, 4)}));
    CHECK(re[1] == c(3, 0));
}
