#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lqd {

// Truncated power series sum_k c_k tau^k, k = 0..order.
class Series
{
public:
    using value_type = std::complex<double>;

    Series() = default;
    explicit Series(std::size_t order, value_type constant = 0.0) : c_(order + 1, 0.0) { c_[0] = constant; }

    std::size_t order() const { return c_.size() - 1; }
    value_type &operator[](std::size_t k) { return c_[k]; }
    const value_type &operator[](std::size_t k) const { return c_[k]; }
    const std::vector<value_type> &coefficients() const { return c_; }

    Series &operator+=(const Series &o);
    Series &operator-=(const Series &o);
    Series &operator*=(value_type a);

    value_type evaluate(double tau) const;
    value_type evaluate_derivative(double tau) const;

private:
    std::vector<value_type> c_;
};

Series operator+(Series a, const Series &b);
Series operator-(Series a, const Series &b);
Series operator-(Series a);
Series operator*(Series a, std::complex<double> s);
Series operator*(std::complex<double> s, Series a);
Series operator*(const Series &a, const Series &b);
Series operator/(const Series &a, const Series &b);
Series operator+(Series a, std::complex<double> s);

Series reciprocal(const Series &a);
Series exp(const Series &a);
// log of a series whose constant-term logarithm is supplied, so branch tracking stays with the caller.
Series log(const Series &a, std::complex<double> log_constant);
Series real_part(Series a);
// y0 + integral_0^tau a.
Series integrate(const Series &a, std::complex<double> y0);

} // namespace lqd
