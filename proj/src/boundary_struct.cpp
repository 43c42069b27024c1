#include "relmetric/boundary_struct.hpp"

#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relmetric/parallel.hpp"

namespace relmetric {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPoly>;

constexpr double kInf = std::numeric_limits<double>::infinity();

BPoint bp(const Point2& p) { return {p.x, p.y}; }
Point2 pt(const BPoint& p) { return {p.x(), p.y()}; }

template <class Ring>
void fill_ring(Ring& r, const std::vector<Point2>& pts) {
    r.clear();
    for (const auto& p : pts) r.push_back(bp(p));
    if (!pts.empty()) r.push_back(bp(pts.front()));
}

std::vector<Point2> ring_points(const bg::model::ring<BPoint, false, true>& r) {
    std::vector<Point2> out;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) out.push_back(pt(r[i]));
    return out;
}

std::vector<std::vector<Point2>> poly_rings(const BPoly& p) {
    std::vector<std::vector<Point2>> rings{ring_points(p.outer())};
    for (const auto& in : p.inners()) rings.push_back(ring_points(in));
    return rings;
}

BPoly box_poly(double R) {
    BPoly p;
    fill_ring(p.outer(), {{-R, -R}, {R, -R}, {R, R}, {-R, R}});
    return p;
}

std::string describe_first_point(const BMulti& m) {
    std::ostringstream os;
    os.precision(17);
    if (!m.empty() && !m.front().outer().empty()) os << "(" << m.front().outer()[0].x() << ", " << m.front().outer()[0].y() << ")";
    return os.str();
}

template <class Op>
BMulti checked(const char* what, const BMulti& a, const BMulti& b, Op op) {
    std::string reason;
    if (!bg::is_valid(a, reason)) throw std::runtime_error(std::string(what) + ": invalid operand near " + describe_first_point(a) + ": " + reason);
    if (!bg::is_valid(b, reason)) throw std::runtime_error(std::string(what) + ": invalid operand near " + describe_first_point(b) + ": " + reason);
    BMulti out;
    try {
        op(a, b, out);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(what) + " failed near " + describe_first_point(a) + ": " + e.what());
    }
    return out;
}

BMulti difference(const BMulti& a, const BMulti& b) {
    return checked("difference", a, b, [](const BMulti& x, const BMulti& y, BMulti& o) { bg::difference(x, y, o); });
}

BMulti intersection(const BMulti& a, const BMulti& b) {
    return checked("intersection", a, b, [](const BMulti& x, const BMulti& y, BMulti& o) { bg::intersection(x, y, o); });
}

// U intersected with the working box, ignoring measure-zero boundary parts.
BMulti domain_in_box(const PlanarDomain& d, double R) {
    BPoly base;
    std::size_t first_hole = 0;
    switch (d.kind) {
        case DomainKind::bounded:
            fill_ring(base.outer(), d.loops.at(0).flatten(d.tol.eps_flat));
            first_hole = 1;
            break;
        case DomainKind::complement:
            base = box_poly(R);
            break;
        case DomainKind::clipped:
            fill_ring(base.outer(), clipped_region_polygon(d, R));
            break;
    }
    for (std::size_t i = first_hole; i < d.loops.size(); ++i) {
        base.inners().emplace_back();
        fill_ring(base.inners().back(), d.loops[i].flatten(d.tol.eps_flat));
    }
    bg::correct(base);
    BMulti m{base};
    if (d.kind == DomainKind::bounded) {
        BMulti box{box_poly(R)};
        m = intersection(m, box);
    }
    return m;
}

// Thin quadrilaterals around slits and line pieces; subtracting them splits regions they cross.
BMulti cut_strips(const PlanarDomain& d, double R, double w) {
    std::vector<std::pair<Point2, Point2>> segs;
    for (const auto& s : d.slits)
        for (std::size_t i = 0; i + 1 < s.size(); ++i) segs.push_back({s[i], s[i + 1]});
    for (const auto& l : d.lines) {
        Point2 u = l.unit();
        double scale = norm(l.d);
        double lo = -4 * R - norm(l.p), hi = 4 * R + norm(l.p);
        std::vector<std::array<double, 2>> gaps;
        for (const auto& g : l.gaps) gaps.push_back({g[0] * scale, g[1] * scale});
        std::sort(gaps.begin(), gaps.end());
        double cur = lo;
        for (const auto& g : gaps) {
            if (g[0] > cur) segs.push_back({l.p + u * cur, l.p + u * g[0]});
            cur = std::max(cur, g[1]);
        }
        if (cur < hi) segs.push_back({l.p + u * cur, l.p + u * hi});
    }
    BMulti out;
    for (const auto& [a, b] : segs) {
        double L = distance(a, b);
        if (L <= 0) continue;
        Point2 t = (b - a) / L * w, n{-t.y, t.x};
        BPoly q;
        fill_ring(q.outer(), {a - t - n, b + t - n, b + t + n, a - t + n});
        bg::correct(q);
        BMulti next;
        bg::union_(out, q, next);
        out.swap(next);
    }
    return out;
}

// Boundary points whose convex hull equals conv(dU) inside boxes much smaller than T.
std::vector<Point2> hull_generators(const PlanarDomain& d, double T) {
    std::vector<Point2> pts;
    for (const auto& l : d.loops) {
        auto f = l.flatten(d.tol.eps_flat);
        pts.insert(pts.end(), f.begin(), f.end());
    }
    for (const auto& s : d.slits) pts.insert(pts.end(), s.begin(), s.end());
    for (const auto& l : d.lines) {
        pts.push_back(l.p + l.unit() * T);
        pts.push_back(l.p - l.unit() * T);
    }
    if (d.kind == DomainKind::clipped) {
        for (const auto& v : clipped_region_polygon(d, T)) {
            bool on_line = false;
            for (const auto& h : d.halfplanes) on_line = on_line || std::abs(dot(h.n, v) - h.c) <= 1e-9 * T * norm(h.n);
            if (on_line) pts.push_back(v);
        }
    }
    return pts;
}

bool on_box_edge(const Point2& a, const Point2& b, double R, double tol) {
    auto at = [&](double v, double c) { return std::abs(v - c) <= tol; };
    for (double c : {-R, R}) {
        if (at(a.x, c) && at(b.x, c)) return true;
        if (at(a.y, c) && at(b.y, c)) return true;
    }
    return false;
}

// Components of the union of non-box edges of the given rings.
int boundary_chain_components(const std::vector<std::vector<std::vector<Point2>>>& polys, double R) {
    const double tol = 1e-9 * std::max(1.0, R);
    std::vector<std::pair<Point2, Point2>> edges;
    for (const auto& poly : polys)
        for (const auto& ring : poly)
            for (std::size_t i = 0; i < ring.size(); ++i) {
                const Point2& a = ring[i];
                const Point2& b = ring[(i + 1) % ring.size()];
                if (!on_box_edge(a, b, R, tol)) edges.push_back({a, b});
            }
    const std::size_t n = edges.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& [a, b] = edges[i];
            const auto& [c, e] = edges[j];
            if (distance(a, c) <= tol || distance(a, e) <= tol || distance(b, c) <= tol || distance(b, e) <= tol)
                parent[find(i)] = find(j);
        }
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) count += find(i) == i;
    return count;
}

// Parameter interval of the segment a + t (b - a), t in [0,1], inside a convex CCW polygon.
bool clip_to_convex(const Point2& a, const Point2& b, const std::vector<Point2>& poly, double& t0, double& t1) {
    t0 = 0;
    t1 = 1;
    const Point2 d = b - a;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        // Inside: cross(q - p, x - p) >= 0.
        double num = cross(q - p, a - p), den = cross(q - p, d);
        if (den == 0) {
            if (num < 0) return false;
            continue;
        }
        double t = -num / den;
        if (den > 0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

DomainProbe::DomainProbe(const PlanarDomain& d, double R)
    : domain_(&d),
      box_(R > 0 ? R : GeodesicEngine::box_for(d, {})),
      space_(d, box_, d.tol.eps_flat),
      eps_(d.tol.eps_metric * std::max(1.0, d.max_coordinate())) {}

bool DomainProbe::on_boundary(const Point2& p) const { return boundary_distance(*domain_, p) <= eps_; }

bool DomainProbe::in_open(const Point2& p) const {
    return space_.in_closure(p) && space_.distance_to_boundary(p) > eps_ && boundary_distance(*domain_, p) > eps_;
}

bool DomainProbe::open_segment_in(const Point2& a, const Point2& b) const {
    const double L = distance(a, b);
    if (L <= 2 * eps_) return false;
    const Point2 u = a + (b - a) * (eps_ / L);
    const Point2 v = b - (b - a) * (eps_ / L);
    std::vector<int> cand;
    space_.candidates(u, v, cand);
    const double g = domain_->tol.eps_geom;
    for (int id : cand) {
        const auto& e = space_.edges()[id];
        if (distance(e.a, e.b) <= g) {
            if (point_segment_distance(e.a, u, v) <= g) return false;
        } else if (segments_intersect(u, v, e.a, e.b, g)) {
            return false;
        }
    }
    return in_open((a + b) * 0.5);
}

double DomainProbe::ray_hit(const Point2& p, const Point2& u) const {
    const Point2 far = p + u * (4 * box_);
    std::vector<int> cand;
    space_.candidates(p, far, cand);
    double best = kInf;
    for (int id : cand) {
        const auto& e = space_.edges()[id];
        const Point2 s = e.b - e.a;
        double den = cross(u, s);
        if (std::abs(den) <= 1e-15 * norm(s)) {
            if (std::abs(cross(u, e.a - p)) > eps_) continue;
            for (const Point2* w : {&e.a, &e.b}) {
                double t = dot(*w - p, u);
                if (t > eps_) best = std::min(best, t);
            }
            continue;
        }
        double t = cross(e.a - p, s) / den;
        double r = cross(e.a - p, u) / den;
        if (t > eps_ && r >= -1e-12 && r <= 1 + 1e-12) best = std::min(best, t);
    }
    return best;
}

bool is_boundary_interval(const DomainProbe& probe, const Point2& a, const Point2& b) {
    if (distance(a, b) <= probe.eps()) return false;
    return probe.on_boundary(a) && probe.on_boundary(b) && probe.open_segment_in(a, b);
}

bool is_boundary_interval(const PlanarDomain& d, const Point2& a, const Point2& b) {
    DomainProbe probe(d, GeodesicEngine::box_for(d, {a, b}));
    return is_boundary_interval(probe, a, b);
}

std::vector<Point2> boundary_candidates(const PlanarDomain& d, int k) {
    std::vector<Point2> out;
    auto add_edge_samples = [&](const Point2& a, const Point2& b) {
        for (int i = 1; i <= k; ++i) out.push_back(a + (b - a) * (static_cast<double>(i) / (k + 1)));
    };
    for (const auto& l : d.loops) {
        auto f = l.flatten(d.tol.eps_flat);
        for (std::size_t i = 0; i < f.size(); ++i) {
            out.push_back(f[i]);
            add_edge_samples(f[i], f[(i + 1) % f.size()]);
        }
    }
    for (const auto& s : d.slits)
        for (std::size_t i = 0; i < s.size(); ++i) {
            out.push_back(s[i]);
            if (i + 1 < s.size()) add_edge_samples(s[i], s[i + 1]);
        }
    return out;
}

std::vector<BoundaryInterval> enumerate_boundary_intervals(const DomainProbe& probe, const std::vector<Point2>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<BoundaryInterval>> found(n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!is_boundary_interval(probe, pts[i], pts[j])) continue;
            BoundaryInterval iv{pts[i], pts[j], true};
            // Collinear extension: the interval is maximal when neither end continues into U.
            for (int side = 0; side < 2; ++side) {
                const Point2& e = side == 0 ? iv.x : iv.y;
                const Point2& o = side == 0 ? iv.y : iv.x;
                Point2 u = (e - o) / distance(e, o);
                double t = std::min(probe.ray_hit(e, u), 2 * probe.box_half_width());
                if (std::isfinite(t) && probe.open_segment_in(e, e + u * t)) iv.maximal = false;
            }
            found[i].push_back(iv);
        }
    });
    std::vector<BoundaryInterval> out;
    for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
    return out;
}

std::vector<BoundaryInterval> enumerate_boundary_intervals(const PlanarDomain& d, int k) {
    auto pts = boundary_candidates(d, k);
    DomainProbe probe(d, GeodesicEngine::box_for(d, pts));
    return enumerate_boundary_intervals(probe, pts);
}

std::optional<BoundaryAngle> detect_boundary_angle(const DomainProbe& probe, const Point2& x, const Point2& y,
                                                   const Point2& z) {
    if (orientation(x, y, z, probe.domain().tol.eps_geom) == Orientation::collinear) return std::nullopt;
    if (!probe.on_boundary(x) || !probe.on_boundary(y) || !probe.on_boundary(z)) return std::nullopt;
    if (!probe.open_segment_in(x, y) || !probe.open_segment_in(y, z)) return std::nullopt;

    // Orient the wedge so that it sweeps CCW from a to b.
    Point2 a = (x - y) / distance(x, y), b = (z - y) / distance(z, y);
    if (cross(a, b) < 0) std::swap(a, b);
    const double span = std::atan2(cross(a, b), dot(a, b));
    auto strictly_inside = [&](const Point2& dir) { return cross(a, dir) > 0 && cross(dir, b) > 0; };

    // Edge clearance: distance from y to every edge not through y; edges through y must leave the wedge.
    double clearance = kInf;
    for (const auto& e : probe.space().edges()) {
        if (point_segment_distance(y, e.a, e.b) <= probe.eps()) {
            for (const Point2* w : {&e.a, &e.b}) {
                if (distance(*w, y) <= probe.eps()) continue;
                if (strictly_inside((*w - y) / distance(*w, y))) return std::nullopt;
            }
            continue;
        }
        clearance = std::min(clearance, point_segment_distance(y, e.a, e.b));
    }
    double r = std::min(distance(x, y), distance(z, y));
    for (int k = 0; k <= 40; ++k, r *= 0.5) {
        if (r >= clearance) continue;
        bool ok = true;
        for (int i = 1; i <= 8 && ok; ++i)
            for (int j = 1; j < 16 && ok; ++j) {
                double ang = span * j / 16.0;
                Point2 dir = a * std::cos(ang) + Point2{-a.y, a.x} * std::sin(ang);
                ok = probe.in_open(y + dir * (r * i / 8.0));
            }
        if (ok) return BoundaryAngle{x, y, z, r};
    }
    return std::nullopt;
}

std::optional<BoundaryAngle> detect_boundary_angle(const PlanarDomain& d, const Point2& x, const Point2& y,
                                                   const Point2& z) {
    DomainProbe probe(d, GeodesicEngine::box_for(d, {x, y, z}));
    return detect_boundary_angle(probe, x, y, z);
}

GammaSet gamma_set(const PlanarDomain& d, const BoundaryAngle& angle, const std::vector<Point2>& candidates) {
    std::vector<Point2> all = candidates;
    all.push_back(angle.x);
    all.push_back(angle.z);
    all.push_back(angle.y);
    DomainProbe probe(d, GeodesicEngine::box_for(d, all));
    if (!detect_boundary_angle(probe, angle.x, angle.y, angle.z)) throw std::invalid_argument("gamma_set: angle invalid");
    const Point2& y = angle.y;
    Point2 a = angle.x - y, b = angle.z - y;
    if (cross(a, b) < 0) std::swap(a, b);
    const double tol = probe.eps();
    auto in_wedge = [&](const Point2& w) {
        Point2 v = w - y;
        return norm(v) > tol && cross(a, v) >= -tol * norm(a) && cross(v, b) >= -tol * norm(b);
    };
    std::vector<Point2> wedge_pts{angle.x, angle.z};
    for (const auto& w : candidates)
        if (in_wedge(w) && probe.on_boundary(w)) wedge_pts.push_back(w);
    auto hull = convex_hull(wedge_pts);

    GammaSet g;
    g.angle = angle;
    g.E = hull.vertices;
    auto on_hull_boundary = [&](const Point2& w) {
        const auto& V = hull.vertices;
        if (V.size() == 1) return distance(w, V[0]) <= tol;
        for (std::size_t i = 0; i < V.size(); ++i)
            if (point_segment_distance(w, V[i], V[(i + 1) % V.size()]) <= tol) return true;
        return false;
    };
    auto avoids_E = [&](const Point2& w) {
        if (hull.shape != HullResult::Shape::polygon) return true;  // line yw meets the chord only at w
        double t0, t1;
        if (!clip_to_convex(y, w, hull.vertices, t0, t1)) return true;
        return t0 >= 1 - tol / std::max(tol, distance(y, w));
    };
    std::vector<Point2> seen;
    for (const auto& w : wedge_pts) {
        bool dup = false;
        for (const auto& s : seen) dup = dup || distance(s, w) <= tol;
        if (dup) continue;
        seen.push_back(w);
        if (on_hull_boundary(w) && probe.open_segment_in(y, w) && avoids_E(w)) g.members.push_back(w);
    }
    auto has = [&](const Point2& p) {
        return std::any_of(g.members.begin(), g.members.end(), [&](const Point2& m) { return distance(m, p) <= tol; });
    };
    if (!has(angle.x) || !has(angle.z)) throw std::logic_error("gamma_set: legs missing from the member set");
    for (const auto& m : g.members)
        if (!is_boundary_interval(probe, y, m)) throw std::logic_error("gamma_set: member without a boundary interval");
    return g;
}

FuDecomposition decompose_Fu(const PlanarDomain& d) {
    FuDecomposition out;
    const double R = 4 * std::max(1.0, d.max_coordinate()) + 1;
    const double T = 1e6 * R;
    out.box_half_width = R;

    auto gens = hull_generators(d, T);
    if (gens.empty()) throw std::invalid_argument("decompose_Fu: domain has no boundary");
    auto hull = convex_hull(gens);
    BMulti UB = domain_in_box(d, R);

    if (hull.shape != HullResult::Shape::polygon) {
        out.hull = hull.vertices;
        out.hull_degenerate = true;
        // A point or segment hull has empty interior: F_U is U minus a null set.
        if (d.kind != DomainKind::bounded) {
            for (const auto& p : UB) out.F_U.push_back(poly_rings(p));
            out.F_components = static_cast<int>(UB.size());
            out.F_area = bg::area(UB);
            out.boundary_F_components = out.F_components > 0 ? 1 : 0;
        }
        return out;
    }
    std::vector<Point2> H = hull.vertices;
    for (const HalfPlane& h : {HalfPlane{{1, 0}, R}, HalfPlane{{-1, 0}, R}, HalfPlane{{0, 1}, R}, HalfPlane{{0, -1}, R}})
        H = clip_convex(H, h);
    out.hull = H;
    BPoly hp;
    fill_ring(hp.outer(), H);
    bg::correct(hp);
    BMulti HM{hp};

    BMulti F = difference(UB, HM);
    // Slivers from floating-point overlay along shared edges are not regions.
    const double sliver = 1e-12 * R * R;
    for (const auto& p : F) {
        if (bg::area(p) <= sliver) continue;
        out.F_U.push_back(poly_rings(p));
        out.F_area += bg::area(p);
    }
    out.F_components = static_cast<int>(out.F_U.size());
    out.boundary_F_components = boundary_chain_components(out.F_U, R);
    if (d.kind == DomainKind::bounded && out.F_components != 0)
        throw std::logic_error("decompose_Fu: bounded domain with nonempty F_U");
    if (out.boundary_F_components > 2) throw std::logic_error("decompose_Fu: more than two boundary components of F_U");

    BMulti inner = intersection(UB, HM);
    BMulti cuts = cut_strips(d, R, 1e-9 * R);
    if (!cuts.empty()) inner = difference(inner, cuts);
    for (const auto& p : inner)
        if (bg::area(p) > sliver) out.U_components.push_back(poly_rings(p));
    return out;
}

bool intervals_joinable(const DomainProbe& probe, const BoundaryInterval& a, const BoundaryInterval& b, int samples) {
    for (int i = 1; i <= samples; ++i) {
        Point2 z1 = a.x + (a.y - a.x) * (static_cast<double>(i) / (samples + 1));
        for (int j = 1; j <= samples; ++j) {
            Point2 z2 = b.x + (b.y - b.x) * (static_cast<double>(j) / (samples + 1));
            if (distance(z1, z2) <= probe.eps()) return true;
            // Both endpoints are interior points of U, so the closed segment is in U iff its open part is clear.
            if (probe.in_open(z1) && probe.in_open(z2) && probe.open_segment_in(z1, z2)) return true;
        }
    }
    return false;
}

std::vector<int> interval_equivalence_classes(const DomainProbe& probe, const std::vector<BoundaryInterval>& iv) {
    const std::size_t n = iv.size();
    std::vector<std::vector<char>> join(n, std::vector<char>(n, 0));
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) join[i][j] = intervals_joinable(probe, iv[i], iv[j]);
    });
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (join[i][j]) parent[find(i)] = find(j);
    std::vector<int> label(n, -1), ids(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (ids[r] < 0) ids[r] = next++;
        label[i] = ids[r];
    }
    return label;
}

int interval_component(const FuDecomposition& fu, const BoundaryInterval& iv, double tol) {
    BPoint mid = bp((iv.x + iv.y) * 0.5);
    for (std::size_t i = 0; i < fu.U_components.size(); ++i) {
        BPoly p;
        fill_ring(p.outer(), fu.U_components[i][0]);
        for (std::size_t k = 1; k < fu.U_components[i].size(); ++k) {
            p.inners().emplace_back();
            fill_ring(p.inners().back(), fu.U_components[i][k]);
        }
        bg::correct(p);
        if (bg::distance(mid, p) <= tol) return static_cast<int>(i);
    }
    return -1;
}

nlohmann::json to_json(const BoundaryInterval& iv) {
    return {{"x", json_point(iv.x)}, {"y", json_point(iv.y)}, {"maximal", iv.maximal}};
}

nlohmann::json to_json(const BoundaryAngle& a) {
    return {{"x", json_point(a.x)}, {"y", json_point(a.y)}, {"z", json_point(a.z)}, {"radius_witness", a.radius_witness}};
}

nlohmann::json to_json(const FuDecomposition& fu) {
    auto polys = [](const std::vector<std::vector<std::vector<Point2>>>& ps) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : ps) {
            nlohmann::json rings = nlohmann::json::array();
            for (const auto& r : p) {
                nlohmann::json ring = nlohmann::json::array();
                for (const auto& v : r) ring.push_back(json_point(v));
                rings.push_back(ring);
            }
            arr.push_back(rings);
        }
        return arr;
    };
    nlohmann::json hull = nlohmann::json::array();
    for (const auto& v : fu.hull) hull.push_back(json_point(v));
    return {{"hull", hull},
            {"hull_degenerate", fu.hull_degenerate},
            {"box_half_width", fu.box_half_width},
            {"F_components", fu.F_components},
            {"boundary_F_components", fu.boundary_F_components},
            {"F_area", fu.F_area},
            {"F_U", polys(fu.F_U)},
            {"U_components", polys(fu.U_components)}};
}

}  // namespace relmetric
