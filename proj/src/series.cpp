#include "lqd/series.hpp"

#include <cmath>

namespace lqd {

Series &Series::operator+=(const Series &o)
{
    for (std::size_t k = 0; k < c_.size(); ++k)
        c_[k] += o.c_[k];
    return *this;
}

Series &Series::operator-=(const Series &o)
{
    for (std::size_t k = 0; k < c_.size(); ++k)
        c_[k] -= o.c_[k];
    return *this;
}

Series &Series::operator*=(value_type a)
{
    for (auto &v : c_)
        v *= a;
    return *this;
}

Series::value_type Series::evaluate(double tau) const
{
    value_type acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;)
        acc = acc * tau + c_[k];
    return acc;
}

Series::value_type Series::evaluate_derivative(double tau) const
{
    value_type acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 1;)
        acc = acc * tau + static_cast<double>(k) * c_[k];
    return acc;
}

Series operator+(Series a, const Series &b) { return a += b; }
Series operator-(Series a, const Series &b) { return a -= b; }
Series operator-(Series a) { return a *= -1.0; }
Series operator*(Series a, std::complex<double> s) { return a *= s; }
Series operator*(std::complex<double> s, Series a) { return a *= s; }

Series operator+(Series a, std::complex<double> s)
{
    a[0] += s;
    return a;
}

Series operator*(const Series &a, const Series &b)
{
    const std::size_t n = a.order();
    Series r(n);
    for (std::size_t k = 0; k <= n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j)
            acc += a[j] * b[k - j];
        r[k] = acc;
    }
    return r;
}

Series operator/(const Series &a, const Series &b)
{
    const std::size_t n = a.order();
    Series q(n);
    for (std::size_t k = 0; k <= n; ++k) {
        std::complex<double> acc = a[k];
        for (std::size_t j = 1; j <= k; ++j)
            acc -= b[j] * q[k - j];
        q[k] = acc / b[0];
    }
    return q;
}

Series reciprocal(const Series &a)
{
    const std::size_t n = a.order();
    Series r(n);
    r[0] = 1.0 / a[0];
    for (std::size_t k = 1; k <= n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += a[j] * r[k - j];
        r[k] = -acc * r[0];
    }
    return r;
}

Series exp(const Series &a)
{
    // e' = a' e  =>  k e_k = sum_{j=1..k} j a_j e_{k-j}
    const std::size_t n = a.order();
    Series e(n);
    e[0] = std::exp(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += static_cast<double>(j) * a[j] * e[k - j];
        e[k] = acc / static_cast<double>(k);
    }
    return e;
}

Series log(const Series &a, std::complex<double> log_constant)
{
    // l' = a'/a  =>  k l_k a_0 = k a_k - sum_{j=1..k-1} j l_j a_{k-j}
    const std::size_t n = a.order();
    Series l(n);
    l[0] = log_constant;
    for (std::size_t k = 1; k <= n; ++k) {
        std::complex<double> acc = static_cast<double>(k) * a[k];
        for (std::size_t j = 1; j < k; ++j)
            acc -= static_cast<double>(j) * l[j] * a[k - j];
        l[k] = acc / (static_cast<double>(k) * a[0]);
    }
    return l;
}

Series real_part(Series a)
{
    for (std::size_t k = 0; k <= a.order(); ++k)
        a[k] = a[k].real();
    return a;
}

Series integrate(const Series &a, std::complex<double> y0)
{
    const std::size_t n = a.order();
    Series r(n);
    r[0] = y0;
    for (std::size_t k = 1; k <= n; ++k)
        r[k] = a[k - 1] / static_cast<double>(k);
    return r;
}

} // namespace lqd
