#include "relmetric/geom_core.hpp"

#include <algorithm>
#include <limits>

namespace relmetric {

namespace {

// Expansion arithmetic after Shewchuk: components are non-overlapping and stored in
// increasing magnitude.
inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    double bv = x - a;
    double av = x - bv;
    y = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& x, double& y) {
    x = a - b;
    double bv = a - x;
    double av = x + bv;
    y = (a - av) + (bv - b);
}

inline void two_product(double a, double b, double& x, double& y) {
    x = a * b;
    y = std::fma(a, b, -x);
}

std::vector<double> grow_expansion(const std::vector<double>& e, double b) {
    std::vector<double> h;
    h.reserve(e.size() + 1);
    double q = b;
    for (double ei : e) {
        double qn, hh;
        two_sum(q, ei, qn, hh);
        q = qn;
        if (hh != 0.0) h.push_back(hh);
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

std::vector<double> expansion_sum(const std::vector<double>& e, const std::vector<double>& f) {
    std::vector<double> h = e;
    for (double fi : f) h = grow_expansion(h, fi);
    return h;
}

std::vector<double> scale_two(double d_hi, double d_lo, double c) {
    double p1, p0, q1, q0;
    two_product(d_hi, c, p1, p0);
    two_product(d_lo, c, q1, q0);
    std::vector<double> e;
    for (double v : {p0, p1}) {
        if (v != 0.0) e.push_back(v);
    }
    e = grow_expansion(e, q0);
    e = grow_expansion(e, q1);
    return e;
}

int expansion_sign(const std::vector<double>& e) {
    for (auto it = e.rbegin(); it != e.rend(); ++it) {
        if (*it > 0.0) return 1;
        if (*it < 0.0) return -1;
    }
    return 0;
}

int orient2d_exact(const Point2& a, const Point2& b, const Point2& c) {
    // det = ax (by - cy) + bx (cy - ay) + cx (ay - by)
    double h, l;
    two_diff(b.y, c.y, h, l);
    auto t1 = scale_two(h, l, a.x);
    two_diff(c.y, a.y, h, l);
    auto t2 = scale_two(h, l, b.x);
    two_diff(a.y, b.y, h, l);
    auto t3 = scale_two(h, l, c.x);
    return expansion_sign(expansion_sum(expansion_sum(t1, t2), t3));
}

}  // namespace

void Tolerance::validate() const {
    if (!(eps_geom > 0.0) || !(eps_flat > 0.0) || !(eps_metric > 0.0))
        throw std::invalid_argument("tolerance: all eps values must be positive");
    if (!(eps_geom <= eps_flat) || !(eps_geom <= eps_metric))
        throw std::invalid_argument("tolerance: eps_geom must not exceed eps_flat or eps_metric");
}

double Arc2::sweep() const {
    constexpr double two_pi = 2.0 * kPi;
    double d = a1 - a0;
    if (ccw) {
        d = std::fmod(d, two_pi);
        if (d <= 0.0) d += two_pi;
    } else {
        d = std::fmod(d, two_pi);
        if (d >= 0.0) d -= two_pi;
    }
    return d;
}

Point2 Arc2::at_length(double s) const {
    double sw = sweep();
    double t = (radius > 0.0) ? s / radius : 0.0;
    return point_at_angle(a0 + (sw >= 0.0 ? t : -t));
}

Point2 Arc2::tangent_at_length(double s) const {
    double sw = sweep();
    double t = s / radius;
    double ang = a0 + (sw >= 0.0 ? t : -t);
    Point2 tg{-std::sin(ang), std::cos(ang)};
    return sw >= 0.0 ? tg : -tg;
}

std::vector<Point2> Arc2::flatten(double eps_flat) const {
    double sw = sweep();
    double ratio = std::clamp(1.0 - eps_flat / radius, -1.0, 1.0);
    double max_step = 2.0 * std::acos(ratio);
    if (!(max_step > 0.0)) max_step = kPi / 2;
    max_step = std::min(max_step, kPi / 8);
    int n = std::max(1, static_cast<int>(std::ceil(std::abs(sw) / max_step)));
    std::vector<Point2> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) out.push_back(point_at_angle(a0 + sw * i / n));
    return out;
}

double Arc2::distance_to(const Point2& p) const {
    Point2 d = p - center;
    double sw = sweep();
    double ang = std::atan2(d.y, d.x);
    double rel = ang - a0;
    if (sw >= 0.0) {
        rel = std::fmod(rel, 2 * kPi);
        if (rel < 0) rel += 2 * kPi;
        if (rel <= sw) return std::abs(norm(d) - radius);
    } else {
        rel = std::fmod(rel, 2 * kPi);
        if (rel > 0) rel -= 2 * kPi;
        if (rel >= sw) return std::abs(norm(d) - radius);
    }
    return std::min(distance(p, start()), distance(p, end()));
}

int orient2d_sign(const Point2& a, const Point2& b, const Point2& c) {
    double detleft = (a.x - c.x) * (b.y - c.y);
    double detright = (a.y - c.y) * (b.x - c.x);
    double det = detleft - detright;
    double detsum = std::abs(detleft) + std::abs(detright);
    constexpr double eps = std::numeric_limits<double>::epsilon() * 0.5;
    constexpr double errbound = (3.0 + 16.0 * eps) * eps;
    if (std::abs(det) > errbound * detsum) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    return orient2d_exact(a, b, c);
}

Orientation orientation(const Point2& a, const Point2& b, const Point2& c, double eps_geom) {
    if (eps_geom > 0.0) {
        double len = distance(a, b);
        double cross_v = cross(b - a, c - a);
        if (len == 0.0) {
            if (distance(a, c) <= eps_geom) return Orientation::collinear;
        } else if (std::abs(cross_v) <= eps_geom * len) {
            return Orientation::collinear;
        }
    }
    int s = orient2d_sign(a, b, c);
    return s > 0 ? Orientation::left : (s < 0 ? Orientation::right : Orientation::collinear);
}

double signed_line_distance(const Point2& a, const Point2& b, const Point2& c) {
    double len = distance(a, b);
    if (len == 0.0) return distance(a, c);
    return cross(b - a, c - a) / len;
}

double project_param(const Point2& p, const Point2& a, const Point2& b) {
    Point2 d = b - a;
    double l2 = dot(d, d);
    if (l2 == 0.0) return 0.0;
    return dot(p - a, d) / l2;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    double t = std::clamp(project_param(p, a, b), 0.0, 1.0);
    return distance(p, a + (b - a) * t);
}

bool segments_cross_properly(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2,
                             double eps) {
    auto o1 = orientation(p1, p2, q1, eps);
    auto o2 = orientation(p1, p2, q2, eps);
    auto o3 = orientation(q1, q2, p1, eps);
    auto o4 = orientation(q1, q2, p2, eps);
    if (o1 == Orientation::collinear || o2 == Orientation::collinear ||
        o3 == Orientation::collinear || o4 == Orientation::collinear)
        return false;
    return o1 != o2 && o3 != o4;
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2,
                        double eps) {
    if (segments_cross_properly(p1, p2, q1, q2, eps)) return true;
    return point_segment_distance(q1, p1, p2) <= eps || point_segment_distance(q2, p1, p2) <= eps ||
           point_segment_distance(p1, q1, q2) <= eps || point_segment_distance(p2, q1, q2) <= eps;
}

double polygon_signed_area(std::span<const Point2> ring) {
    double a = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) a += cross(ring[i], ring[(i + 1) % n]);
    return 0.5 * a;
}

double polygon_perimeter(std::span<const Point2> ring) {
    double s = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) s += distance(ring[i], ring[(i + 1) % n]);
    return s;
}

HullResult convex_hull(std::span<const Point2> points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    HullResult res;
    if (pts.size() == 1) {
        res.vertices = pts;
        res.shape = HullResult::Shape::point;
        return res;
    }
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orient2d_sign(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient2d_sign(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    res.vertices = std::move(h);
    res.shape = res.vertices.size() <= 2 ? HullResult::Shape::segment : HullResult::Shape::polygon;
    return res;
}

RigidMotion2 RigidMotion2::rotation_about(const Point2& c, double angle) {
    RigidMotion2 m;
    m.angle = angle;
    Point2 rc{std::cos(angle) * c.x - std::sin(angle) * c.y, std::sin(angle) * c.x + std::cos(angle) * c.y};
    m.translation = c - rc;
    return m;
}

RigidMotion2 RigidMotion2::reflection_across_line(const Point2& p, const Point2& dir) {
    RigidMotion2 m;
    m.reflect = true;
    m.angle = 2.0 * std::atan2(dir.y, dir.x);
    m.translation = p - m.apply_vector(p);
    return m;
}

Point2 RigidMotion2::apply_vector(const Point2& v) const {
    double vy = reflect ? -v.y : v.y;
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * vy, s * v.x + c * vy};
}

Point2 RigidMotion2::apply(const Point2& p) const { return apply_vector(p) + translation; }

RigidMotion2 RigidMotion2::compose(const RigidMotion2& inner) const {
    RigidMotion2 m;
    m.angle = wrap_angle(angle + (reflect ? -inner.angle : inner.angle));
    m.reflect = reflect != inner.reflect;
    m.translation = apply(inner.translation);
    return m;
}

RigidMotion2 RigidMotion2::inverse() const {
    RigidMotion2 m;
    m.reflect = reflect;
    m.angle = reflect ? angle : -angle;
    m.translation = -m.apply_vector(translation);
    return m;
}

double wrap_angle(double a) {
    double r = std::fmod(a + kPi, 2 * kPi);
    if (r <= 0) r += 2 * kPi;
    return r - kPi;
}

}  // namespace relmetric
