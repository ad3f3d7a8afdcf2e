#pragma once

#include "lqd/chordal.hpp"
#include "lqd/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lqd {

enum class LatticeKind { square, triangle, hexagonal };

const char *to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string &name);

// Moves are direction names or angles in degrees ("90", "-30").
//   square:    U R D L
//   triangle:  R UR UL L DL DR
//   hexagonal: U DL DR from even vertices, D UR UL from odd ones (the origin is even)
struct LatticePathSpec {
    LatticeKind kind = LatticeKind::square;
    double spacing = 1;
    double origin = 0;
    std::vector<std::string> moves;
};

struct LatticePath {
    Polyline polyline;
    // Edge directions in units of pi/6.
    std::vector<int> directions;
    double spacing = 1;
};

// Direction of a move in units of pi/6, or a parse error naming the move.
int lattice_direction(LatticeKind kind, int parity, const std::string &move);
std::string lattice_move_name(LatticeKind kind, int direction);

LatticePath build_path(const LatticePathSpec &spec);

// One segment per maximal straight run, stopped by arclength and carrying its heading.
std::vector<PathSegment> to_segments(const LatticePath &path);
std::vector<PathSegment> to_segments(const Polyline &path);

// Self-avoiding walk that stays strictly above the real line after the first move.
LatticePathSpec random_lattice_path(LatticeKind kind, int n_moves, std::uint64_t seed, double spacing = 1,
                                    double origin = 0);

} // namespace lqd
