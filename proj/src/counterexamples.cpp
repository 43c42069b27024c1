#include "relmetric/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace relmetric {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPoly>;

Loop polyline_loop(const std::vector<Point2>& v) {
    Loop l;
    for (std::size_t i = 0; i < v.size(); ++i) l.edges.push_back(Edge::segment(v[i], v[(i + 1) % v.size()]));
    return l;
}

std::vector<Point2> open_ring(const bg::model::ring<BPoint, false, true>& r) {
    std::vector<Point2> out;
    for (const auto& p : r) out.push_back({p.x(), p.y()});
    if (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

BPoly to_bpoly(const std::vector<Point2>& ccw) {
    BPoly p;
    for (const auto& v : ccw) p.outer().push_back(BPoint(v.x, v.y));
    p.outer().push_back(BPoint(ccw.front().x, ccw.front().y));
    bg::correct(p);
    return p;
}

// Distance along the unit ray at angle phi to the first crossing of segment [a, b]; infinity if none.
double ray_segment(double phi, const Point2& a, const Point2& b) {
    Point2 u{std::cos(phi), std::sin(phi)};
    Point2 e = b - a;
    double den = cross(u, e);
    if (std::abs(den) < 1e-300) return std::numeric_limits<double>::infinity();
    double t = cross(a, e) / den;
    double s = cross(a, u) / den;
    if (t < 0 || s < -1e-15 || s > 1 + 1e-15) return std::numeric_limits<double>::infinity();
    return t;
}

double ray_polygon(double phi, const std::vector<Point2>& ring) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ring.size(); ++i)
        best = std::min(best, ray_segment(phi, ring[i], ring[(i + 1) % ring.size()]));
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------

CombDomain gen_comb(int n) {
    if (n < 1) throw std::invalid_argument("comb depth must be >= 1");
    std::vector<Point2> v;
    v.push_back({0.0, 0.0});
    v.push_back({1.0 / (n + 1), 0.0});
    for (int m = n; m >= 2; --m) {
        v.push_back({1.0 / m, 1.0 / m});
        v.push_back({1.0 / m, 0.0});
    }
    v.push_back({1.0, 1.0});
    v.push_back({1.0, 2.0});
    for (int m = 1; m <= n; ++m) {
        double q = 4.0 * m + 3.0;
        v.push_back({4.0 / q, 2.0 / q});
        v.push_back({1.0 / (m + 1), 2.0 / (m + 1)});
    }
    CombDomain c;
    c.depth = n;
    c.domain.kind = DomainKind::bounded;
    c.domain.loops.push_back(polyline_loop(v));
    c.domain.singular_vertices.push_back({0.0, 0.0});
    return c;
}

PlanarDomain convexified_comb() {
    PlanarDomain d;
    d.kind = DomainKind::bounded;
    d.loops.push_back(polyline_loop({{0.0, 0.0}, {0.5, 0.0}, {1.0, 1.0}, {1.0, 2.0}}));
    return d;
}

namespace {

ProbeSequence finish_probe(ProbeSequence p) {
    p.strictly_increasing = true;
    p.min_difference = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < p.distance.size(); ++i) {
        double d = p.distance[i + 1] - p.distance[i];
        p.difference.push_back(d);
        p.min_difference = std::min(p.min_difference, d);
        if (!(d > 0)) p.strictly_increasing = false;
    }
    if (p.difference.empty()) p.min_difference = 0.0;
    return p;
}

}  // namespace

ProbeSequence comb_divergence_probe(int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("bad depth range");
    ProbeSequence p;
    for (int n = n_min; n <= n_max; ++n) {
        CombDomain c = gen_comb(n);
        GeodesicEngine e(c.domain);
        Point2 probe{std::ldexp(1.0, -n), 0.0};
        p.depth.push_back(n);
        p.distance.push_back(e.distance({probe, std::nullopt}, {c.target, std::nullopt}));
    }
    return finish_probe(std::move(p));
}

ProbeSequence convexified_probe(int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("bad depth range");
    PlanarDomain d = convexified_comb();
    GeodesicEngine e(d);
    ProbeSequence p;
    for (int n = n_min; n <= n_max; ++n) {
        Point2 probe{std::ldexp(1.0, -n), 0.0};
        p.depth.push_back(n);
        p.distance.push_back(e.distance({probe, std::nullopt}, {{1.0, 2.0}, std::nullopt}));
    }
    return finish_probe(std::move(p));
}

// ---------------------------------------------------------------------------

long long level_count(int j) { return static_cast<long long>(std::floor(std::pow(2.0 * kPi, j))); }

ObstacleTriangle gen_obstacle_triangle(int J) {
    if (J < 0 || J > 5) throw std::invalid_argument("obstacle depth must be in [0, 5]");
    ObstacleTriangle t;
    t.depth = J;
    t.D = {std::cos(kPi / 6), std::sin(kPi / 6)};
    for (int j = 1; j <= J; ++j) {
        long long kj = level_count(j);
        t.counts.push_back(static_cast<int>(kj));
        double base = std::pow(2.0 * kPi, -j) * kPi / 6.0;
        double r = std::ldexp(1.0, -j);
        for (long long k = 1; k <= kj; ++k) {
            ObstacleSegment s;
            s.level = j;
            s.k = static_cast<int>(k);
            s.angle = static_cast<double>(k) * base;
            s.x = {r * std::cos(s.angle), r * std::sin(s.angle)};
            s.y = s.x * 11.0;
            t.segments.push_back(s);
        }
    }
    return t;
}

std::optional<std::pair<int, int>> first_intersecting_pair(const ObstacleTriangle& t) {
    const int n = static_cast<int>(t.segments.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (segments_intersect(t.segments[i].x, t.segments[i].y, t.segments[j].x, t.segments[j].y, 0.0))
                return std::make_pair(i, j);
    return std::nullopt;
}

PlanarDomain avoiding_region(const ObstacleTriangle& scene, double r, int* slits, int* notches) {
    if (!(r > 0)) throw std::invalid_argument("inner radius must be positive");
    constexpr int kDisk = 256;
    constexpr double kOvershoot = 1e-9;
    const std::vector<Point2> tri{scene.O, scene.A * 4.0, scene.D * 4.0};
    std::vector<Point2> disk;
    for (int i = 0; i < kDisk; ++i) {
        double a = 2.0 * kPi * i / kDisk;
        disk.push_back({r * std::cos(a), r * std::sin(a)});
    }
    BMulti region;
    if (r < norm(scene.A)) {
        // Triangle minus disk, built directly so that A and D stay exactly on the sides.
        const double t_d = ray_polygon(kPi / 6, disk);
        std::vector<Point2> ring{{r, 0.0}, tri[1], tri[2], Point2{std::cos(kPi / 6), std::sin(kPi / 6)} * t_d};
        for (int i = kDisk - 1; i > 0; --i)
            if (2.0 * kPi * i / kDisk < kPi / 6) ring.push_back(disk[i]);
        region.push_back(to_bpoly(ring));
    }

    const std::vector<Point2> far_edge{tri[1], tri[2]};
    std::vector<std::vector<Point2>> inner_slits;
    int n_slit = 0, n_notch = 0;
    for (const auto& s : scene.segments) {
        double r0 = norm(s.x), r1 = norm(s.y);
        double t_in = ray_polygon(s.angle, disk);
        double t_out = ray_segment(s.angle, far_edge[0], far_edge[1]);
        double lo = std::max(r0, t_in), hi = std::min(r1, t_out);
        if (!(hi > lo)) continue;
        Point2 u{std::cos(s.angle), std::sin(s.angle)};
        const double margin = 1e-12 * std::max(1.0, t_out);
        if (r0 > t_in + margin && r1 < t_out - margin) {
            inner_slits.push_back({s.x, s.y});
            ++n_slit;
            continue;
        }
        // Obstacles reaching the disk or the far side are extended a little past that boundary,
        // so no path slips through the contact point.
        double a = r0 > t_in + margin ? r0 : t_in - kOvershoot;
        double b = r1 < t_out - margin ? r1 : t_out + kOvershoot;
        inner_slits.push_back({u * a, u * b});
        ++n_notch;
    }
    if (slits) *slits = n_slit;
    if (notches) *notches = n_notch;

    PlanarDomain d;
    d.kind = DomainKind::bounded;
    const BPoint a_pt(scene.A.x, scene.A.y), d_pt(scene.D.x, scene.D.y);
    // A and D sit on the triangle sides, so rounding may put them a hair outside.
    auto touches = [](const BPoint& p, const auto& poly) { return bg::distance(p, poly) <= 1e-12; };
    for (const auto& poly : region) {
        if (!touches(a_pt, poly)) continue;
        if (!touches(d_pt, poly)) break;
        d.loops.push_back(polyline_loop(open_ring(poly.outer())));
        for (const auto& in : poly.inners()) d.loops.push_back(polyline_loop(open_ring(in)));
        d.slits = inner_slits;
        break;
    }
    return d;
}

AvoidingPath shortest_avoiding_path(const ObstacleTriangle& scene, double r) {
    AvoidingPath out;
    out.inner_radius = r;
    PlanarDomain d = avoiding_region(scene, r, &out.slit_count, &out.notch_count);
    if (d.loops.empty()) {
        out.note = "no path: A and D are not in one component of the region";
        out.path = GeodesicPath::unreachable(scene.A, scene.D);
        return out;
    }
    GeodesicEngine e(d);
    out.path = e.shortest_path({scene.A, std::nullopt}, {scene.D, std::nullopt});
    out.reachable = out.path.reachable;
    out.length = out.path.length;
    if (!out.reachable) out.note = "no path";
    return out;
}

// ---------------------------------------------------------------------------

Point2 BendPair::map(double x) const {
    if (x >= 0) return {x, 0.0};
    if (x >= -l) {
        double v = -x;
        double a = -kPi / 2 - v / radius;
        return {radius * std::cos(a), radius + radius * std::sin(a)};
    }
    return {P.x, P.y + (-l - x)};
}

double BendPair::inverse_map(const Point2& q) const {
    if (q.y <= 0.0 && q.x >= 0.0) return q.x;
    if (q.y >= P.y && q.x <= P.x + 1e-12) return -l - (q.y - P.y);
    Point2 w = q - Point2{0.0, radius};
    double a = std::atan2(w.y, w.x);  // in [-pi, -pi/2] on the arc
    if (a > 0) a -= 2 * kPi;
    double v = (-kPi / 2 - a) * radius;
    return -std::clamp(v, 0.0, l);
}

BendPair gen_bend_pair(double l) {
    if (!(l > 0)) throw std::invalid_argument("bend parameter l must be positive");
    BendPair b;
    b.l = l;
    b.radius = 2.0 * l / kPi;
    b.P = {-b.radius, b.radius};

    b.U.kind = DomainKind::clipped;
    b.U.halfplanes.push_back({{0.0, 1.0}, 0.0});

    const double W = 64.0 * l;
    Loop q;
    q.edges.push_back(Edge::segment({W, 0.0}, {W, W}));
    q.edges.push_back(Edge::segment({W, W}, {-b.radius, W}));
    q.edges.push_back(Edge::segment({-b.radius, W}, b.P));
    Arc2 arc;
    arc.center = {0.0, b.radius};
    arc.radius = b.radius;
    arc.a0 = kPi;
    arc.a1 = 1.5 * kPi;
    arc.ccw = true;
    q.edges.push_back(Edge::circular(arc));
    q.edges.push_back(Edge::segment({0.0, 0.0}, {W, 0.0}));
    b.V.kind = DomainKind::complement;
    b.V.loops.push_back(q);
    // Arc flattening below the local defect budget.
    b.V.tol.eps_flat = 1e-6;

    BoundaryCorrespondence f;
    BoundaryCorrespondence::ComponentMap cm;
    cm.u = {BoundaryRef::Kind::halfplane, 0};
    cm.v = {BoundaryRef::Kind::loop, 0};
    cm.window = std::array<double, 2>{-4.0 * l, 4.0 * l};
    f.components.push_back(cm);
    auto Vp = std::make_shared<const PlanarDomain>(b.V);
    auto Up = std::make_shared<const PlanarDomain>(b.U);
    BendPair geometry = b;  // the maps only need l, radius and P
    f.forward = [Vp, geometry](const BoundaryPoint& p) {
        Point2 img = geometry.map(p.xy.x);
        return locate_boundary_point(*Vp, {BoundaryRef::Kind::loop, 0}, img);
    };
    f.inverse = [Up, geometry](const BoundaryPoint& q) {
        Point2 pre{geometry.inverse_map(q.xy), 0.0};
        return locate_boundary_point(*Up, {BoundaryRef::Kind::halfplane, 0}, pre);
    };
    b.correspondence = f;
    return b;
}

// ---------------------------------------------------------------------------

double cardioid_residual(const Point2& xz) {
    double r = std::hypot(xz.x, xz.y);
    return xz.x * xz.x + xz.y * xz.y - r + xz.y;
}

CardioidSolid gen_cardioid_solid(int m, int profile_samples) {
    if (m < 16) throw std::invalid_argument("cardioid needs at least 16 facets");
    if (profile_samples < 8) throw std::invalid_argument("cardioid needs at least 8 profile samples");
    CardioidSolid c;
    c.facets = m;
    const double x_splice = std::sqrt(5.0) / 9.0;
    // Circular cap z = 1 - sqrt(2/3 - x^2), from the axis to the splice point.
    const int n_cap = std::max(4, profile_samples / 4);
    for (int i = 0; i < n_cap; ++i) {
        double x = x_splice * i / n_cap;
        c.profile.push_back({x, 1.0 - std::sqrt(2.0 / 3.0 - x * x)});
    }
    c.splice_index = static_cast<int>(c.profile.size());
    // Cardioid r = 1 - cos(theta), theta measured from +z, from the splice to the bottom pole.
    const double th0 = std::acos(2.0 / 3.0);
    for (int i = 0; i <= profile_samples; ++i) {
        double th = th0 + (kPi - th0) * i / profile_samples;
        double r = 1.0 - std::cos(th);
        Point2 p{r * std::sin(th), r * std::cos(th)};
        if (i == 0) p = {x_splice, 2.0 / 9.0};
        if (i == profile_samples) p = {0.0, -2.0};
        c.profile.push_back(p);
    }

    Mesh& mesh = c.mesh;
    const int n = static_cast<int>(c.profile.size());
    mesh.vertices.push_back({0.0, 0.0, c.profile.front().y});
    for (int i = 1; i + 1 < n; ++i)
        for (int k = 0; k < m; ++k) {
            double a = 2.0 * kPi * k / m;
            mesh.vertices.push_back({c.profile[i].x * std::cos(a), c.profile[i].x * std::sin(a), c.profile[i].y});
        }
    const int bottom = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({0.0, 0.0, c.profile.back().y});
    auto ring = [m](int i, int k) { return 1 + (i - 1) * m + ((k % m) + m) % m; };
    for (int k = 0; k < m; ++k) mesh.faces.push_back({0, ring(1, k), ring(1, k + 1)});
    for (int i = 1; i + 2 < n; ++i)
        for (int k = 0; k < m; ++k) {
            mesh.faces.push_back({ring(i, k), ring(i + 1, k), ring(i + 1, k + 1)});
            mesh.faces.push_back({ring(i, k), ring(i + 1, k + 1), ring(i, k + 1)});
        }
    for (int k = 0; k < m; ++k) mesh.faces.push_back({bottom, ring(n - 2, k + 1), ring(n - 2, k)});
    return c;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ProbeSequence& p) {
    return {{"depth", p.depth},
            {"distance", p.distance},
            {"difference", p.difference},
            {"strictly_increasing", p.strictly_increasing},
            {"min_difference", p.min_difference}};
}

nlohmann::json to_json(const ObstacleTriangle& t) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : t.segments)
        segs.push_back({{"level", s.level}, {"k", s.k}, {"angle", s.angle}, {"x", json_point(s.x)}, {"y", json_point(s.y)}});
    return {{"type", "obstacle_triangle"},
            {"depth", t.depth},
            {"A", json_point(t.A)},
            {"O", json_point(t.O)},
            {"D", json_point(t.D)},
            {"counts", t.counts},
            {"segments", segs}};
}

nlohmann::json to_json(const AvoidingPath& p) {
    nlohmann::json j{{"reachable", p.reachable},
                     {"length", p.length},
                     {"inner_radius", p.inner_radius},
                     {"slits", p.slit_count},
                     {"notches", p.notch_count}};
    if (p.reachable) j["path"] = path_to_json(p.path);
    if (!p.note.empty()) j["note"] = p.note;
    return j;
}

nlohmann::json to_json(const CardioidSolid& c) {
    nlohmann::json prof = nlohmann::json::array();
    for (const auto& p : c.profile) prof.push_back(json_point(p));
    return {{"type", "cardioid_solid"},
            {"facets", c.facets},
            {"profile", prof},
            {"splice_index", c.splice_index},
            {"vertices", c.mesh.vertices.size()},
            {"faces", c.mesh.faces.size()},
            {"mesh", to_json(inspect_mesh(c.mesh))}};
}

}  // namespace relmetric
