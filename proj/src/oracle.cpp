#include "lqd/oracle.hpp"

#include "lqd/errors.hpp"
#include "log.hpp"

// Boost 1.74's pchip calls isnan unqualified.
#include <cmath>
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lqd {

namespace {

constexpr double pi = std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool on_segment(cplx p, cplx a, cplx b)
{
    return std::min(a.real(), b.real()) - 1e-14 <= p.real() && p.real() <= std::max(a.real(), b.real()) + 1e-14
        && std::min(a.imag(), b.imag()) - 1e-14 <= p.imag() && p.imag() <= std::max(a.imag(), b.imag()) + 1e-14;
}

std::vector<cplx> subdivide(const std::vector<cplx> &v, int n)
{
    std::vector<cplx> out;
    for (std::size_t k = 1; k < v.size(); ++k)
        for (int j = 1; j <= n; ++j)
            out.push_back(v[k - 1] + (v[k] - v[k - 1]) * (static_cast<double>(j) / n));
    return out;
}

// Strictly increasing copy of (t, xi), keeping the later sample on ties.
void monotone_columns(const TraceResult &r, std::vector<double> &t, std::vector<double> &x)
{
    for (const auto &s : r.samples) {
        if (!t.empty() && s.t <= t.back()) {
            if (s.t == t.back())
                x.back() = s.xi;
            continue;
        }
        t.push_back(s.t);
        x.push_back(s.xi);
    }
}

} // namespace

bool segments_intersect(cplx a0, cplx a1, cplx b0, cplx b1)
{
    double d1 = cross(a1 - a0, b0 - a0);
    double d2 = cross(a1 - a0, b1 - a0);
    double d3 = cross(b1 - b0, a0 - b0);
    double d4 = cross(b1 - b0, a1 - b0);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    const double eps = 1e-14 * (1 + std::abs(a0) + std::abs(a1) + std::abs(b0) + std::abs(b1));
    if (std::abs(d1) <= eps && on_segment(b0, a0, a1))
        return true;
    if (std::abs(d2) <= eps && on_segment(b1, a0, a1))
        return true;
    if (std::abs(d3) <= eps && on_segment(a0, b0, b1))
        return true;
    if (std::abs(d4) <= eps && on_segment(a1, b0, b1))
        return true;
    return false;
}

void validate_polyline(const Polyline &path)
{
    const auto &v = path.vertices;
    if (v.size() < 2)
        fail(ErrorKind::domain, "polyline needs at least two vertices");
    if (v[0].imag() != 0.0)
        fail(ErrorKind::domain, "polyline must start on the real line");
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (!(v[k].imag() > 0))
            fail(ErrorKind::boundary_exit, "polyline vertex " + std::to_string(k) + " is not in the upper half-plane");
        if (v[k] == v[k - 1])
            fail(ErrorKind::domain, "polyline has repeated consecutive vertices");
    }
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        for (std::size_t j = i + 1; j + 1 < v.size(); ++j) {
            if (j == i + 1) {
                // Adjacent edges share a vertex; they only fail by folding back onto each other.
                cplx d1 = v[i + 1] - v[i], d2 = v[j + 1] - v[j];
                if (std::abs(cross(d1, d2)) <= 1e-14 * std::abs(d1) * std::abs(d2) && (d1 * std::conj(d2)).real() < 0)
                    fail(ErrorKind::self_intersection, "polyline folds back on edge " + std::to_string(j));
                continue;
            }
            if (segments_intersect(v[i], v[i + 1], v[j], v[j + 1]))
                fail(ErrorKind::self_intersection,
                     "polyline edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        }
    }
}

OracleRun polyline_zipper(const Polyline &path, int n_subdiv, const OracleConfig &config)
{
    validate_polyline(path);
    if (n_subdiv < 1)
        fail(ErrorKind::domain, "n_subdiv must be at least 1");
    const int m = std::max(1, config.dense_samples);

    std::vector<cplx> original = subdivide(path.vertices, n_subdiv);
    std::vector<cplx> pts = original;
    OracleRun run;
    run.maps.reserve(pts.size());
    auto &samples = run.trace.samples;
    samples.reserve(pts.size() * static_cast<std::size_t>(m));

    double x = path.vertices[0].real();
    double t = 0;
    double length = 0;
    cplx prev_orig = path.vertices[0];
    for (std::size_t k = 0; k < pts.size(); ++k) {
        cplx d = pts[k] - x;
        if (!(d.imag() > 0))
            fail(ErrorKind::self_intersection,
                 "pulled-back vertex " + std::to_string(k) + " left the upper half-plane");
        double p = std::arg(d) / pi;
        double s = std::abs(d) / (std::pow(p, p) * std::pow(1 - p, 1 - p));
        double dt = p * (1 - p) * s * s / 4;
        auto map = TiltedSlitMap::make(p, x, 2 * dt);
        double edge = std::abs(original[k] - prev_orig);
        for (int j = 1; j <= m; ++j) {
            double nu = static_cast<double>(j) / m;
            Sample row;
            row.t = t + dt * nu * nu;
            row.xi = x + (1 - 2 * p) * s * nu;
            row.tip = prev_orig + (original[k] - prev_orig) * nu;
            row.arclength = length + edge * nu;
            samples.push_back(std::move(row));
        }
        t += dt;
        length += edge;
        prev_orig = original[k];
        x = map.landmarks().tip_preimage;
        for (std::size_t i = k + 1; i < pts.size(); ++i) {
            cplx w = pts[i];
            try {
                pts[i] = map.invert(w, w + map.capacity() / (w - map.x()), config.newton);
            } catch (const Error &e) {
                fail(e.kind(), std::string(e.what()) + " (pulling back vertex " + std::to_string(i) + ")");
            }
        }
        run.maps.push_back(map);
    }
    run.trace.stop_reason = StopReason::length_reached;
    log_info("zipper: {} elementary maps, total t={}", run.maps.size(), t);
    return run;
}

TraceResult polyline_driving(const Polyline &path, int n_subdiv, const OracleConfig &config)
{
    return polyline_zipper(path, n_subdiv, config).trace;
}

double composed_capacity(const std::vector<TiltedSlitMap> &maps)
{
    if (maps.empty())
        return 0;
    // Radius well outside the hull: sum of slit sizes bounds its extent.
    double centre = maps.front().x();
    double extent = 0;
    for (const auto &f : maps)
        extent = std::max(extent, std::abs(f.x() - centre)) + f.scale();
    double radius = 4 * (extent + 1);
    const int n = 256;
    cplx acc = 0;
    for (int k = 0; k < n; ++k) {
        cplx z = centre + std::polar(radius, 2 * pi * (k + 0.5) / n);
        cplx w = z;
        for (auto it = maps.rbegin(); it != maps.rend(); ++it)
            w = it->apply(w);
        acc += (w - z) * (z - centre);
    }
    return -(acc / static_cast<double>(n)).real();
}

double sup_deviation(const TraceResult &a, const TraceResult &b)
{
    std::vector<double> ta, xa, tb, xb;
    monotone_columns(a, ta, xa);
    monotone_columns(b, tb, xb);
    if (ta.size() < 2 || tb.size() < 2)
        fail(ErrorKind::empty_overlap, "traces need at least two samples to compare");
    double lo = std::max(ta.front(), tb.front());
    double hi = std::min(ta.back(), tb.back());
    if (!(lo < hi))
        fail(ErrorKind::empty_overlap, "traces have no common time range");

    std::vector<double> grid;
    for (double t : ta)
        if (t >= lo && t <= hi)
            grid.push_back(t);
    for (double t : tb)
        if (t >= lo && t <= hi)
            grid.push_back(t);

    auto interpolant = [](std::vector<double> t, std::vector<double> x) {
        using boost::math::interpolators::pchip;
        if (t.size() < 4) {
            // pchip needs four nodes; pad linearly between the endpoints.
            std::vector<double> tt, xx;
            for (std::size_t i = 0; i + 1 < t.size(); ++i)
                for (int j = 0; j < 3; ++j) {
                    tt.push_back(t[i] + (t[i + 1] - t[i]) * j / 3.0);
                    xx.push_back(x[i] + (x[i + 1] - x[i]) * j / 3.0);
                }
            tt.push_back(t.back());
            xx.push_back(x.back());
            t = std::move(tt);
            x = std::move(xx);
        }
        return pchip<std::vector<double>>(std::move(t), std::move(x));
    };
    auto fa = interpolant(std::move(ta), std::move(xa));
    auto fb = interpolant(std::move(tb), std::move(xb));
    double worst = 0;
    for (double t : grid)
        worst = std::max(worst, std::abs(fa(t) - fb(t)));
    return worst;
}

std::vector<RadialOracleSample> radial_polyline_driving(const DiscPolyline &path, int n_subdiv,
                                                        const OracleConfig &config)
{
    const auto &v = path.vertices;
    if (v.size() < 2)
        fail(ErrorKind::domain, "disc polyline needs at least two vertices");
    if (std::abs(std::abs(v[0]) - 1) > 1e-12)
        fail(ErrorKind::domain, "disc polyline must start on the unit circle");
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(std::abs(v[k]) < 1))
            fail(ErrorKind::boundary_exit, "disc polyline vertex " + std::to_string(k) + " is not inside the disc");
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        for (std::size_t j = i + 2; j + 1 < v.size(); ++j)
            if (segments_intersect(v[i], v[i + 1], v[j], v[j + 1]))
                fail(ErrorKind::self_intersection, "disc polyline intersects itself");
    if (n_subdiv < 1)
        fail(ErrorKind::domain, "n_subdiv must be at least 1");
    const int m = std::max(1, config.dense_samples);

    std::vector<cplx> original = subdivide(v, n_subdiv);
    std::vector<cplx> pts = original;
    std::vector<RadialOracleSample> out;
    out.reserve(pts.size() * static_cast<std::size_t>(m));

    const cplx I(0, 1);
    double xi = std::arg(v[0]);
    double t = 0;
    cplx prev_orig = v[0];

    // Cayley chart H -> D sending 0 to u and i to 0, its inverse, and the normalized step.
    struct Step {
        double dt;
        double xi;
        cplx zstar;
        cplx rot; // e^{i alpha}
    };
    auto step_for = [&](const TiltedSlitMap &f, cplx u) {
        cplx zeta = f.invert(I, I, config.newton);
        cplx fprime = f.derivative(zeta);
        Step st;
        st.dt = -std::log(std::abs(fprime) * zeta.imag());
        cplx zstar = u * (I - zeta) / (I + zeta);
        cplx hprime = -fprime * (I + zeta) * (I + zeta) / 4.0;
        st.zstar = zstar;
        st.rot = std::polar(1.0, -std::arg(hprime));
        cplx c = u * (I - f.landmarks().tip_preimage) / (I + f.landmarks().tip_preimage);
        cplx back = (std::conj(st.rot) * c - zstar) / (1.0 - std::conj(zstar) * std::conj(st.rot) * c);
        st.xi = nearest_branch(std::arg(back), xi);
        return st;
    };

    for (std::size_t k = 0; k < pts.size(); ++k) {
        cplx u = std::polar(1.0, xi);
        cplx zh = I * (u - pts[k]) / (u + pts[k]);
        if (!(zh.imag() > 0))
            fail(ErrorKind::self_intersection, "pulled-back disc vertex left the disc");
        double p = std::arg(zh) / pi;
        double s = std::abs(zh) / (std::pow(p, p) * std::pow(1 - p, 1 - p));
        double hcap = p * (1 - p) * s * s / 2;
        auto map = TiltedSlitMap::make(p, 0.0, hcap);
        for (int j = 1; j < m; ++j) {
            double nu = static_cast<double>(j) / m;
            auto part = step_for(TiltedSlitMap::make(p, 0.0, hcap * nu * nu), u);
            out.push_back({t + part.dt, part.xi, prev_orig + (original[k] - prev_orig) * nu});
        }
        Step st = step_for(map, u);
        t += st.dt;
        out.push_back({t, st.xi, original[k]});
        prev_orig = original[k];
        for (std::size_t i = k + 1; i < pts.size(); ++i) {
            cplx w = pts[i];
            cplx z = I * (u - w) / (u + w);
            cplx y = map.invert(z, z + map.capacity() / z, config.newton);
            cplx c = u * (I - y) / (I + y);
            pts[i] = (std::conj(st.rot) * c - st.zstar) / (1.0 - std::conj(st.zstar) * std::conj(st.rot) * c);
        }
        xi = st.xi;
    }
    return out;
}

} // namespace lqd
