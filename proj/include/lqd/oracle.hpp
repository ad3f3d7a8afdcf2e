#pragma once

#include "lqd/chordal.hpp"
#include "lqd/slitmaps.hpp"

#include <vector>

namespace lqd {

// First vertex on the real line, the rest in the open upper half-plane.
struct Polyline {
    std::vector<cplx> vertices;
};

// Throws on a real or repeated later vertex and on self-intersection.
void validate_polyline(const Polyline &path);
bool segments_intersect(cplx a0, cplx a1, cplx b0, cplx b1);

struct OracleConfig {
    NewtonOptions newton;
    // Extra samples inside each elementary slit, quadratically spaced in time.
    int dense_samples = 8;
};

struct OracleRun {
    TraceResult trace;
    // Elementary maps in the order they were fitted (first slit first).
    std::vector<TiltedSlitMap> maps;
};

OracleRun polyline_zipper(const Polyline &path, int n_subdiv, const OracleConfig &config = {});
TraceResult polyline_driving(const Polyline &path, int n_subdiv, const OracleConfig &config = {});

// Half-plane capacity of f_1 o f_2 o ... o f_n measured from the 1/z coefficient on a large circle.
double composed_capacity(const std::vector<TiltedSlitMap> &maps);

// sup |xi_a - xi_b| over the common time range, monotone cubic interpolation in t.
double sup_deviation(const TraceResult &a, const TraceResult &b);

// Disc version: the polyline starts on the unit circle and runs inside the disc.
struct DiscPolyline {
    std::vector<cplx> vertices;
};

struct RadialOracleSample {
    double t;
    double xi;
    cplx tip;
};

std::vector<RadialOracleSample> radial_polyline_driving(const DiscPolyline &path, int n_subdiv,
                                                        const OracleConfig &config = {});

} // namespace lqd
