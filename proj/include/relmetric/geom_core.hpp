#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relmetric {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 operator/(double s) const { return {x / s, y / s}; }
    Point2 operator-() const { return {-x, -y}; }
    bool operator==(const Point2& o) const = default;
};

inline Point2 operator*(double s, const Point2& p) { return p * s; }

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3() = default;
    constexpr Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Point3& o) const = default;
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

/// Tolerance set shared by every module. Ordering eps_geom <= eps_flat <= eps_metric
/// is enforced by validate().
struct Tolerance {
    double eps_geom = 1e-12;
    double eps_flat = 1e-6;
    double eps_metric = 1e-9;

    void validate() const;
};

struct Segment2 {
    Point2 a;
    Point2 b;

    double length() const { return distance(a, b); }
    Point2 at(double t) const { return a + (b - a) * t; }
};

/// Circular arc from angle a0 to a1 around center. When ccw is true the arc sweeps
/// counter-clockwise from a0 to a1, otherwise clockwise. A full circle has |span| = 2*pi.
struct Arc2 {
    Point2 center;
    double radius = 1.0;
    double a0 = 0.0;
    double a1 = 0.0;
    bool ccw = true;

    /// Signed sweep, positive for ccw.
    double sweep() const;
    double length() const { return radius * std::abs(sweep()); }
    Point2 point_at_angle(double ang) const {
        return {center.x + radius * std::cos(ang), center.y + radius * std::sin(ang)};
    }
    Point2 start() const { return point_at_angle(a0); }
    Point2 end() const { return point_at_angle(a0 + sweep()); }
    /// Point at arclength s from the start, s in [0, length()].
    Point2 at_length(double s) const;
    /// Unit tangent at arclength s, in traversal direction.
    Point2 tangent_at_length(double s) const;
    /// Chord vertices (including both ends) with sagitta <= eps_flat.
    std::vector<Point2> flatten(double eps_flat) const;
    double distance_to(const Point2& p) const;
};

enum class Orientation { right = -1, collinear = 0, left = 1 };

/// Exact sign of the determinant |b-a, c-a|, evaluated with a floating-point filter
/// and an exact expansion fallback.
int orient2d_sign(const Point2& a, const Point2& b, const Point2& c);

/// Orientation of the triangle abc. Triples whose distance from c to line ab is within
/// eps_geom are collinear; the remaining cases use the exact sign.
Orientation orientation(const Point2& a, const Point2& b, const Point2& c, double eps_geom = 0.0);

/// Signed distance of c from the directed line ab (positive on the left).
double signed_line_distance(const Point2& a, const Point2& b, const Point2& c);

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);
/// Parameter of the projection of p onto line ab, unclamped.
double project_param(const Point2& p, const Point2& a, const Point2& b);

/// Proper crossing of two segments: interiors meet transversally at a single point,
/// every endpoint farther than eps from the other segment's supporting line.
bool segments_cross_properly(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2,
                             double eps);
bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2,
                        double eps);

double polygon_signed_area(std::span<const Point2> ring);
double polygon_perimeter(std::span<const Point2> ring);

struct HullResult {
    std::vector<Point2> vertices;  // CCW, no repeated closing vertex
    enum class Shape { point, segment, polygon } shape = Shape::polygon;
};

/// Andrew monotone chain. Collinear points on hull edges are dropped.
HullResult convex_hull(std::span<const Point2> points);

/// Rotation then translation, optionally preceded by reflection across the x-axis:
/// p -> R(angle) * S * p + t, where S = diag(1,-1) when reflect is set.
struct RigidMotion2 {
    double angle = 0.0;
    Point2 translation{0.0, 0.0};
    bool reflect = false;

    static RigidMotion2 identity() { return {}; }
    static RigidMotion2 rotation_about(const Point2& c, double angle);
    static RigidMotion2 reflection_across_line(const Point2& p, const Point2& dir);

    Point2 apply(const Point2& p) const;
    Point2 apply_vector(const Point2& v) const;
    RigidMotion2 compose(const RigidMotion2& inner) const;  // this ∘ inner
    RigidMotion2 inverse() const;
};

inline Point2 apply_motion(const RigidMotion2& m, const Point2& p) { return m.apply(p); }

double wrap_angle(double a);  // to (-pi, pi]

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace relmetric
