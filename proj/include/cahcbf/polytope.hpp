#pragma once

#include <vector>

#include "cahcbf/vec2.hpp"

namespace cahcbf {

// Closed half-plane n·u <= c. Normals are stored unit-length.
struct HalfSpace {
    Vec2 n;
    double c = 0.0;
};

// Bounded convex region of a 2-D control plane, kept in dual form:
// the defining half-spaces plus a cached counter-clockwise vertex list.
// Construction canonicalizes the representation (redundant half-spaces
// dropped, collinear vertices merged, vertex list rotated to start at the
// lexicographically smallest point) so equal regions compare equal.
class Polytope2 {
public:
    Polytope2() = default;  // empty placeholder, only valid as an assignment target

    // Throws std::domain_error when the intersection is empty or unbounded.
    static Polytope2 from_halfspaces(const std::vector<HalfSpace>& rows);

    // Rebuilds the region from a counter-clockwise convex vertex list.
    static Polytope2 from_vertices(const std::vector<Vec2>& verts);

    static Polytope2 box(double half_x, double half_y);

    const std::vector<HalfSpace>& halfspaces() const { return rows_; }
    const std::vector<Vec2>& vertices() const { return verts_; }

    bool contains(const Vec2& u, double tol = 1e-9) const;

    // Euclidean projection onto the region (identity for interior points).
    Vec2 project(const Vec2& u) const;

private:
    std::vector<HalfSpace> rows_;
    std::vector<Vec2> verts_;
};

}  // namespace cahcbf
