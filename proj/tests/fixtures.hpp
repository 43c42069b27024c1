#pragma once

#include <random>
#include <vector>

#include "relmetric/domain.hpp"

namespace fixtures {

using relmetric::Point2;
using relmetric::PlanarDomain;

inline PlanarDomain unit_square() { return relmetric::make_polygon_domain({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline PlanarDomain l_polygon() {
    return relmetric::make_polygon_domain({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
}

inline PlanarDomain pentagon_notch() {
    return relmetric::make_polygon_domain({{0, 0}, {4, 0}, {4, 4}, {2, 2}, {0, 4}});
}

inline PlanarDomain circle(Point2 c = {0, 0}, double r = 1.0) {
    PlanarDomain d;
    relmetric::Loop loop;
    relmetric::Arc2 a{c, r, 0.0, 2 * relmetric::kPi, true};
    loop.edges.push_back(relmetric::Edge::circular(a));
    d.loops.push_back(loop);
    return d;
}

inline PlanarDomain halfplane_below() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::clipped;
    d.halfplanes.push_back({{0, 1}, 0});
    return d;
}

inline PlanarDomain quadrant() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::clipped;
    d.halfplanes.push_back({{-1, 0}, 0});
    d.halfplanes.push_back({{0, -1}, 0});
    return d;
}

inline PlanarDomain complement_of_segment() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::complement;
    d.slits.push_back({{0, 0}, {1, 0}});
    return d;
}

inline PlanarDomain complement_of_point() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::complement;
    d.slits.push_back({{0, 0}});
    return d;
}

inline PlanarDomain complement_of_square() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::complement;
    relmetric::Loop loop;
    std::vector<Point2> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int i = 0; i < 4; ++i) loop.edges.push_back(relmetric::Edge::segment(v[i], v[(i + 1) % 4]));
    d.loops.push_back(loop);
    return d;
}

// Complement of an H-shaped obstacle: two notches inside the hull [0,3]^2.
inline PlanarDomain complement_of_h() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::complement;
    std::vector<Point2> v{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 2}, {1, 2}, {1, 3}, {0, 3}};
    relmetric::Loop loop;
    for (std::size_t i = 0; i < v.size(); ++i) loop.edges.push_back(relmetric::Edge::segment(v[i], v[(i + 1) % v.size()]));
    d.loops.push_back(loop);
    return d;
}

// Two parallel lines y = 0 and y = 1, each with a gap, so the complement stays connected.
inline PlanarDomain strip_complement() {
    PlanarDomain d;
    d.kind = relmetric::DomainKind::complement;
    d.lines.push_back({{0, 0}, {1, 0}, {{-0.5, 0.5}}});
    d.lines.push_back({{0, 1}, {1, 0}, {{-0.5, 0.5}}});
    return d;
}

// Random convex polygon: sorted random angles on an ellipse-like radius profile, then hull.
inline std::vector<Point2> random_convex(std::mt19937_64& rng, int max_vertices) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> N(3, max_vertices);
    int n = N(rng);
    std::vector<Point2> pts;
    while (true) {
        pts.clear();
        for (int i = 0; i < n; ++i) {
            double a = 2 * relmetric::kPi * U(rng);
            double r = 1.0 + 2.0 * U(rng);
            pts.push_back({r * std::cos(a) * (1 + U(rng)), r * std::sin(a)});
        }
        auto h = relmetric::convex_hull(pts);
        if (h.vertices.size() >= 3) return h.vertices;
    }
}

// Strictly convex domain bounded by circular arcs: each edge of a random convex polygon
// bulges outward by a half-angle small enough to keep every vertex turn positive.
inline PlanarDomain random_strictly_convex_arcs(std::mt19937_64& rng, int max_vertices = 9) {
    using relmetric::Arc2;
    auto poly = random_convex(rng, max_vertices);
    while (poly.size() < 4) poly = random_convex(rng, max_vertices);
    const std::size_t n = poly.size();
    std::vector<double> ext(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
        ext[i] = std::atan2(relmetric::cross(b - a, c - b), relmetric::dot(b - a, c - b));
    }
    PlanarDomain d;
    relmetric::Loop loop;
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = poly[i], b = poly[(i + 1) % n];
        double alpha = 0.4 * std::min(ext[i], ext[(i + 1) % n]);
        double half = relmetric::distance(a, b) / 2;
        double r = half / std::sin(alpha);
        Point2 t = (b - a) / (2 * half);
        Point2 c = (a + b) * 0.5 + Point2{-t.y, t.x} * (r * std::cos(alpha));
        double a0 = std::atan2(a.y - c.y, a.x - c.x);
        loop.edges.push_back(relmetric::Edge::circular(Arc2{c, r, a0, a0 + 2 * alpha, true}));
    }
    d.loops.push_back(loop);
    return d;
}

// Random simple polygon: star-shaped around the origin with sorted angles.
inline std::vector<Point2> random_simple(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> ang(n);
    for (auto& a : ang) a = 2 * relmetric::kPi * U(rng);
    std::sort(ang.begin(), ang.end());
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        double r = 0.5 + 1.5 * U(rng);
        pts.push_back({r * std::cos(ang[i]), r * std::sin(ang[i])});
    }
    // Remove near-duplicate angles that produce degenerate slivers.
    std::vector<Point2> out;
    for (const auto& p : pts)
        if (out.empty() || relmetric::distance(out.back(), p) > 1e-3) out.push_back(p);
    return out;
}

}  // namespace fixtures
