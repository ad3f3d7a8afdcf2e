#include "lqd/lattice.hpp"

#include "lqd/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace lqd {

namespace {

using std::numbers::pi;

// e^{i k pi/6} = ((cx + cs sqrt3) + i (sx + ss sqrt3)) / 2
struct UnitVector {
    int cx, cs, sx, ss;
};

constexpr std::array<UnitVector, 12> units{{
    {2, 0, 0, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}, {0, 0, 2, 0}, {-1, 0, 0, 1}, {0, -1, 1, 0},
    {-2, 0, 0, 0}, {0, -1, -1, 0}, {-1, 0, 0, -1}, {0, 0, -2, 0}, {1, 0, 0, -1}, {0, 1, -1, 0},
}};

// Exact vertex: twice the offset, split into rational and sqrt3 parts.
using Node = std::array<long, 4>;

Node step(Node n, int dir)
{
    const auto &u = units[static_cast<std::size_t>(dir)];
    return {n[0] + u.cx, n[1] + u.cs, n[2] + u.sx, n[3] + u.ss};
}

cplx position(const Node &n, double origin, double spacing)
{
    const double r3 = std::numbers::sqrt3;
    return {origin + spacing * (static_cast<double>(n[0]) + static_cast<double>(n[1]) * r3) / 2,
            spacing * (static_cast<double>(n[2]) + static_cast<double>(n[3]) * r3) / 2};
}

bool above(const Node &n) { return static_cast<double>(n[2]) + static_cast<double>(n[3]) * std::numbers::sqrt3 > 0; }

std::vector<int> palette(LatticeKind kind, int parity)
{
    switch (kind) {
    case LatticeKind::square: return {3, 0, 9, 6};
    case LatticeKind::triangle: return {0, 2, 4, 6, 8, 10};
    case LatticeKind::hexagonal: return parity == 0 ? std::vector<int>{3, 7, 11} : std::vector<int>{9, 1, 5};
    }
    return {};
}

const char *name_of(int dir)
{
    static const std::array<const char *, 12> names{"R", "UR", "UR", "U", "UL", "UL", "L", "DL", "DL", "D", "DR", "DR"};
    return names[static_cast<std::size_t>(dir)];
}

cplx heading_of(int dir)
{
    // exact on the axes
    switch (dir) {
    case 0: return {1, 0};
    case 3: return {0, 1};
    case 6: return {-1, 0};
    case 9: return {0, -1};
    default: return std::polar(1.0, dir * pi / 6);
    }
}

} // namespace

const char *to_string(LatticeKind kind)
{
    switch (kind) {
    case LatticeKind::square: return "square";
    case LatticeKind::triangle: return "triangle";
    case LatticeKind::hexagonal: return "hexagonal";
    }
    return "unknown";
}

LatticeKind lattice_kind_from_string(const std::string &name)
{
    if (name == "square")
        return LatticeKind::square;
    if (name == "triangle" || name == "triangular")
        return LatticeKind::triangle;
    if (name == "hexagonal" || name == "hex")
        return LatticeKind::hexagonal;
    fail(ErrorKind::parse, "unknown lattice kind '" + name + "'");
}

int lattice_direction(LatticeKind kind, int parity, const std::string &move)
{
    auto allowed = palette(kind, parity);
    int dir = -1;
    double deg = 0;
    auto [end, ec] = std::from_chars(move.data(), move.data() + move.size(), deg);
    if (ec == std::errc() && end == move.data() + move.size()) {
        double k = deg / 30;
        if (std::abs(k - std::round(k)) > 1e-9)
            fail(ErrorKind::parse, "lattice move '" + move + "' is not a multiple of 30 degrees");
        dir = static_cast<int>(((static_cast<long>(std::round(k)) % 12) + 12) % 12);
    } else {
        for (int d : allowed)
            if (move == name_of(d))
                dir = d;
        if (dir < 0)
            fail(ErrorKind::parse, "unknown " + std::string(to_string(kind)) + " lattice move '" + move + "'");
    }
    if (std::find(allowed.begin(), allowed.end(), dir) == allowed.end())
        fail(ErrorKind::parse, "move '" + move + "' is not a " + to_string(kind) + " lattice direction here");
    return dir;
}

std::string lattice_move_name(LatticeKind, int direction) { return name_of(((direction % 12) + 12) % 12); }

LatticePath build_path(const LatticePathSpec &spec)
{
    if (!(spec.spacing > 0) || !std::isfinite(spec.spacing))
        fail(ErrorKind::domain, "lattice spacing must be positive");
    if (!std::isfinite(spec.origin))
        fail(ErrorKind::domain, "lattice origin must be finite");
    if (spec.moves.empty())
        fail(ErrorKind::domain, "lattice path needs at least one move (a single vertex is not a slit)");

    LatticePath out;
    out.spacing = spec.spacing;
    Node node{0, 0, 0, 0};
    std::set<Node> seen{node};
    out.polyline.vertices.push_back({spec.origin, 0});
    for (std::size_t k = 0; k < spec.moves.size(); ++k) {
        int dir = lattice_direction(spec.kind, static_cast<int>(k % 2), spec.moves[k]);
        node = step(node, dir);
        if (!above(node))
            fail(ErrorKind::boundary_exit, "lattice move " + std::to_string(k) + " leaves the upper half-plane");
        if (!seen.insert(node).second)
            fail(ErrorKind::self_intersection, "lattice move " + std::to_string(k) + " revisits a vertex");
        out.directions.push_back(dir);
        out.polyline.vertices.push_back(position(node, spec.origin, spec.spacing));
    }
    validate_polyline(out.polyline);
    return out;
}

std::vector<PathSegment> to_segments(const LatticePath &path)
{
    std::vector<PathSegment> out;
    for (std::size_t k = 0; k < path.directions.size(); ++k) {
        int dir = path.directions[k];
        if (k > 0 && dir == path.directions[k - 1]) {
            out.back().stop.value += path.spacing;
            continue;
        }
        PathSegment seg;
        seg.phi = (dir % 6) * pi / 6;
        seg.stop = {StopCriterion::Kind::arclength, path.spacing};
        seg.heading = heading_of(dir);
        out.push_back(seg);
    }
    return out;
}

std::vector<PathSegment> to_segments(const Polyline &path)
{
    validate_polyline(path);
    std::vector<PathSegment> out;
    const auto &v = path.vertices;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        cplx d = v[k + 1] - v[k];
        double len = std::abs(d);
        if (!out.empty()) {
            cplx prev = *out.back().heading;
            if (std::abs((d * std::conj(prev)).imag()) <= 1e-12 * len && (d * std::conj(prev)).real() > 0) {
                out.back().stop.value += len;
                continue;
            }
        }
        double phi = std::arg(d);
        if (phi < 0)
            phi += pi;
        if (phi >= pi)
            phi -= pi;
        // snap to multiples of pi/12 so downstream exponents stay small rationals
        double q = phi * 12 / pi;
        if (std::abs(q - std::round(q)) < 1e-12)
            phi = std::fmod(std::round(q), 12.0) * pi / 12;
        PathSegment seg;
        seg.phi = phi;
        seg.stop = {StopCriterion::Kind::arclength, len};
        seg.heading = d / len;
        out.push_back(seg);
    }
    return out;
}

LatticePathSpec random_lattice_path(LatticeKind kind, int n_moves, std::uint64_t seed, double spacing, double origin)
{
    if (n_moves < 1)
        fail(ErrorKind::domain, "random lattice path needs at least one move");
    std::mt19937_64 rng(seed);
    std::vector<int> dirs;
    std::vector<Node> nodes{{0, 0, 0, 0}};
    std::vector<std::vector<int>> options;

    auto candidates = [&](std::size_t depth) {
        auto p = palette(kind, static_cast<int>(depth % 2));
        std::shuffle(p.begin(), p.end(), rng);
        std::vector<int> ok;
        for (int d : p) {
            Node n = step(nodes.back(), d);
            if (above(n) && std::find(nodes.begin(), nodes.end(), n) == nodes.end())
                ok.push_back(d);
        }
        return ok;
    };

    options.push_back(candidates(0));
    std::size_t budget = 1'000'000;
    while (static_cast<int>(dirs.size()) < n_moves) {
        if (--budget == 0 || options.empty())
            fail(ErrorKind::no_convergence, "no self-avoiding lattice path of the requested length");
        if (options.back().empty()) {
            // dead end: back up one move
            options.pop_back();
            if (dirs.empty())
                fail(ErrorKind::no_convergence, "no self-avoiding lattice path of the requested length");
            dirs.pop_back();
            nodes.pop_back();
            continue;
        }
        int d = options.back().back();
        options.back().pop_back();
        dirs.push_back(d);
        nodes.push_back(step(nodes.back(), d));
        options.push_back(candidates(dirs.size()));
    }

    LatticePathSpec spec;
    spec.kind = kind;
    spec.spacing = spacing;
    spec.origin = origin;
    for (int d : dirs)
        spec.moves.push_back(lattice_move_name(kind, d));
    return spec;
}

} // namespace lqd
