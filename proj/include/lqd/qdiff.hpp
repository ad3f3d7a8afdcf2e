#pragma once

#include "lqd/rational.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace lqd {

using cplx = std::complex<double>;

// log with the cut along the ray pointing straight down from 0: arg in (-pi/2, 3pi/2].
cplx downward_log(cplx w);
// Shift an angle/log by a multiple of 2*pi so it lies closest to a reference value.
double nearest_branch(double value, double reference);
cplx nearest_branch(cplx log_value, cplx reference);

struct Factor {
    cplx loc;
    Rational exponent;
};

// R * prod (z - loc_j)^{exp_j}, each power on the downward-cut branch.
class FactorizedQD
{
public:
    FactorizedQD(); // Q == 1
    FactorizedQD(cplx prefactor, std::vector<Factor> factors);

    cplx prefactor() const { return prefactor_; }
    const std::vector<Factor> &factors() const { return factors_; }

    cplx evaluate(cplx z) const;
    // log Q(z) on the downward-cut branch, summed factor by factor.
    cplx log_evaluate(cplx z) const;
    cplx log_derivative(cplx z) const;
    FactorizedQD rotate(double theta) const;
    std::pair<cplx, cplx> trajectory_tangents(cplx z, double phi) const;
    Rational exponent_sum() const;

    // Exponent at a location (zero when there is no factor there).
    Rational degree_at(cplx z) const;
    // Leading coefficient of Q at a factor location: R * prod_{others} (z - loc)^exp.
    cplx leading_coefficient(cplx z) const;
    bool is_factor_location(cplx z, double tol = 0.0) const;

private:
    cplx prefactor_;
    std::vector<Factor> factors_;
};

} // namespace lqd
