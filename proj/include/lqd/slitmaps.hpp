#pragma once

#include "lqd/qdiff.hpp"

namespace lqd {

struct NewtonOptions {
    double tol = 1e-13;
    int max_iter = 50;
};

struct Landmarks {
    double c_minus;
    double tip_preimage;
    double c_plus;
};

// Hydrodynamically normalized map of the upper half-plane onto the half-plane minus a
// straight slit from x at angle pi*p:
//   F(z) = (z - x - (1-p)s)^p (z - x + p s)^(1-p) + x,  s = sqrt(t_raw).
class TiltedSlitMap
{
public:
    static TiltedSlitMap make(double p, double x, double hcap);
    static double lambda(double p) { return p * (1 - p) / 4; }

    double p() const { return p_; }
    double x() const { return x_; }
    double t_raw() const { return t_raw_; }
    double scale() const { return s_; }
    double capacity() const { return 2 * lambda(p_) * t_raw_; }

    // Points below the real axis are handled by Schwarz reflection.
    cplx apply(cplx z) const;
    cplx derivative(cplx z) const;
    cplx second_derivative(cplx z) const;
    cplx invert(cplx w, cplx guess, const NewtonOptions &opt = {}) const;

    Landmarks landmarks() const;
    cplx tip() const;

private:
    TiltedSlitMap(double p, double x, double t_raw);
    cplx apply_upper(cplx z) const;
    void value_and_derivative(cplx z, cplx &value, cplx &deriv) const;
    cplx newton(cplx w, cplx z0, const NewtonOptions &opt, bool &ok) const;

    double p_;
    double x_;
    double t_raw_;
    double s_;
};

} // namespace lqd
