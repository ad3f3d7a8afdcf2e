#pragma once

// Shared driver/mark flow used by the single- and multi-slit integrators.

#include "lqd/qdiff.hpp"
#include "lqd/series.hpp"

#include <vector>

namespace lqd::detail {

struct FlowPoint {
    std::vector<double> xi_dot;
    std::vector<double> xi_dot_imag;
    std::vector<cplx> mark_dot;
};

struct FlowJets {
    std::vector<Series> xi;
    std::vector<Series> marks;
};

// xi_l' = 2 sum_{k!=l} (b_k+b_l)/(xi_l-xi_k) + b_l sum_i e_i/(xi_l-P_i),  P_i' = sum_l 2 b_l/(P_i-xi_l)
FlowPoint flow_rhs(const std::vector<double> &xi, const std::vector<double> &weights, const std::vector<cplx> &marks,
                   const std::vector<double> &exps);

// Taylor jets of the same flow by Picard iteration on truncated series; weights may vary in time.
FlowJets flow_jets(const std::vector<double> &xi, const std::vector<Series> &weights, const std::vector<cplx> &marks,
                   const std::vector<double> &exps, int order);

Series derivative(const Series &s);

// Smallest time scale on which some mark (or another driver) can reach a driver at the current speeds.
double collision_time(const std::vector<double> &xi, const std::vector<cplx> &marks, const FlowPoint &d);
double min_gap(const std::vector<double> &xi, const std::vector<cplx> &marks);

// Solve poly(tau) = target on [0, tau_max] for an increasing polynomial with poly(0) < target <= poly(tau_max).
double solve_increasing(const Series &poly, double target, double tau_max);

double wrap_angle(double a);

} // namespace lqd::detail
