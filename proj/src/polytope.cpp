#include "cahcbf/polytope.hpp"

#include <algorithm>
#include <stdexcept>

namespace cahcbf {

namespace {

// Seed square for successive clipping. Any genuine control-plane set here is
// orders of magnitude smaller, so a surviving seed-scale vertex means the
// half-space intersection is unbounded.
constexpr double kSeedExtent = 1e7;
constexpr double kUnboundedGuard = 0.5 * kSeedExtent;
constexpr double kVertexMergeTol = 1e-9;

std::vector<Vec2> clip(const std::vector<Vec2>& poly, const HalfSpace& hs) {
    std::vector<Vec2> out;
    out.reserve(poly.size() + 2);
    const size_t n = poly.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2& p = poly[k];
        const Vec2& q = poly[(k + 1) % n];
        const double dp = dot(hs.n, p) - hs.c;
        const double dq = dot(hs.n, q) - hs.c;
        if (dp <= 0.0) {
            out.push_back(p);
        }
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq <= 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

void merge_close_vertices(std::vector<Vec2>& v) {
    std::vector<Vec2> out;
    out.reserve(v.size());
    for (const Vec2& p : v) {
        if (out.empty() || norm(p - out.back()) > kVertexMergeTol) {
            out.push_back(p);
        }
    }
    while (out.size() > 1 && norm(out.front() - out.back()) <= kVertexMergeTol) {
        out.pop_back();
    }
    v = std::move(out);
}

void drop_collinear_vertices(std::vector<Vec2>& v) {
    if (v.size() < 3) {
        return;
    }
    std::vector<Vec2> out;
    out.reserve(v.size());
    const size_t n = v.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2& a = v[(k + n - 1) % n];
        const Vec2& b = v[k];
        const Vec2& c = v[(k + 1) % n];
        const Vec2 e1 = b - a;
        const Vec2 e2 = c - b;
        if (std::abs(cross(e1, e2)) > kVertexMergeTol * (norm(e1) + norm(e2) + 1.0)) {
            out.push_back(b);
        }
    }
    if (out.size() >= 3) {
        v = std::move(out);
    }
}

// Clipping against the large seed square accumulates rounding in the vertex
// chain; snap every vertex to the exact intersection of its two tightest
// defining half-spaces.
void refine_vertices(std::vector<Vec2>& verts, const std::vector<HalfSpace>& rows) {
    for (Vec2& v : verts) {
        std::vector<std::pair<double, size_t>> near;
        for (size_t k = 0; k < rows.size(); ++k) {
            const double res = std::abs(dot(rows[k].n, v) - rows[k].c);
            if (res < 1e-5) {
                near.push_back({res, k});
            }
        }
        std::sort(near.begin(), near.end());
        bool snapped = false;
        for (size_t a = 0; a < near.size() && !snapped; ++a) {
            for (size_t b = a + 1; b < near.size() && !snapped; ++b) {
                const HalfSpace& r1 = rows[near[a].second];
                const HalfSpace& r2 = rows[near[b].second];
                const double det = cross(r1.n, r2.n);
                if (std::abs(det) < 1e-9) {
                    continue;
                }
                const Vec2 x{(r1.c * r2.n.y - r2.c * r1.n.y) / det,
                             (r2.c * r1.n.x - r1.c * r2.n.x) / det};
                if (norm(x - v) < 1e-5) {
                    v = x;
                    snapped = true;
                }
            }
        }
    }
}

void canonicalize_start(std::vector<Vec2>& v) {
    if (v.size() < 2) {
        return;
    }
    auto lex_less = [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    };
    auto it = std::min_element(v.begin(), v.end(), lex_less);
    std::rotate(v.begin(), it, v.end());
}

}  // namespace

Polytope2 Polytope2::from_halfspaces(const std::vector<HalfSpace>& rows) {
    std::vector<HalfSpace> normed;
    normed.reserve(rows.size());
    for (const HalfSpace& r : rows) {
        const double len = norm(r.n);
        if (len < 1e-15) {
            if (r.c < 0.0) {
                throw std::domain_error("polytope: infeasible zero-normal half-space");
            }
            continue;  // 0·u <= c with c >= 0 is vacuous
        }
        normed.push_back({r.n * (1.0 / len), r.c / len});
    }

    std::vector<Vec2> poly = {{-kSeedExtent, -kSeedExtent},
                              {kSeedExtent, -kSeedExtent},
                              {kSeedExtent, kSeedExtent},
                              {-kSeedExtent, kSeedExtent}};
    for (const HalfSpace& hs : normed) {
        poly = clip(poly, hs);
        if (poly.empty()) {
            throw std::domain_error("polytope: empty half-space intersection");
        }
    }
    merge_close_vertices(poly);
    drop_collinear_vertices(poly);
    for (const Vec2& p : poly) {
        if (std::abs(p.x) > kUnboundedGuard || std::abs(p.y) > kUnboundedGuard) {
            throw std::domain_error("polytope: unbounded half-space intersection");
        }
    }
    refine_vertices(poly, normed);
    merge_close_vertices(poly);
    canonicalize_start(poly);

    Polytope2 result;
    result.verts_ = std::move(poly);
    // Keep only half-spaces supported by at least one vertex.
    for (const HalfSpace& hs : normed) {
        bool active = false;
        bool duplicate = false;
        for (const Vec2& p : result.verts_) {
            if (std::abs(dot(hs.n, p) - hs.c) <= 10.0 * kVertexMergeTol) {
                active = true;
                break;
            }
        }
        for (const HalfSpace& kept : result.rows_) {
            if (norm(kept.n - hs.n) < 1e-12 && std::abs(kept.c - hs.c) < 1e-12) {
                duplicate = true;
                break;
            }
        }
        if (active && !duplicate) {
            result.rows_.push_back(hs);
        }
    }
    if (result.rows_.empty()) {
        throw std::domain_error("polytope: no supporting half-spaces");
    }
    return result;
}

Polytope2 Polytope2::from_vertices(const std::vector<Vec2>& verts) {
    if (verts.size() < 3) {
        throw std::domain_error("polytope: need at least 3 vertices");
    }
    std::vector<HalfSpace> rows;
    rows.reserve(verts.size());
    const size_t n = verts.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2& a = verts[k];
        const Vec2& b = verts[(k + 1) % n];
        const Vec2 e = b - a;
        const double len = norm(e);
        if (len < 1e-12) {
            continue;
        }
        // CCW polygon: outward normal is the edge rotated -90 degrees.
        const Vec2 nvec{e.y / len, -e.x / len};
        rows.push_back({nvec, dot(nvec, a)});
    }
    return from_halfspaces(rows);
}

Polytope2 Polytope2::box(double half_x, double half_y) {
    return from_halfspaces({{{1.0, 0.0}, half_x},
                            {{-1.0, 0.0}, half_x},
                            {{0.0, 1.0}, half_y},
                            {{0.0, -1.0}, half_y}});
}

bool Polytope2::contains(const Vec2& u, double tol) const {
    for (const HalfSpace& hs : rows_) {
        if (dot(hs.n, u) > hs.c + tol) {
            return false;
        }
    }
    return true;
}

Vec2 Polytope2::project(const Vec2& u) const {
    if (contains(u, 0.0)) {
        return u;
    }
    if (verts_.size() == 1) {
        return verts_[0];
    }
    double best_d2 = -1.0;
    Vec2 best = verts_[0];
    const size_t n = verts_.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2& a = verts_[k];
        const Vec2& b = verts_[(k + 1) % n];
        const Vec2 e = b - a;
        const double ee = norm_sq(e);
        double t = 0.0;
        if (ee > 0.0) {
            t = std::clamp(dot(u - a, e) / ee, 0.0, 1.0);
        }
        const Vec2 cand = a + t * e;
        const double d2 = norm_sq(u - cand);
        if (best_d2 < 0.0 || d2 < best_d2) {
            best_d2 = d2;
            best = cand;
        }
    }
    return best;
}

}  // namespace cahcbf
