#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "relmetric/geom_core.hpp"

namespace relmetric {

struct Edge {
    enum class Type { seg, arc };
    Type type = Type::seg;
    Segment2 seg;
    Arc2 arc;

    static Edge segment(const Point2& a, const Point2& b) {
        Edge e;
        e.type = Type::seg;
        e.seg = {a, b};
        return e;
    }
    static Edge circular(const Arc2& a) {
        Edge e;
        e.type = Type::arc;
        e.arc = a;
        return e;
    }

    double length() const { return type == Type::seg ? seg.length() : arc.length(); }
    Point2 start() const { return type == Type::seg ? seg.a : arc.start(); }
    Point2 end() const { return type == Type::seg ? seg.b : arc.end(); }
    Point2 at(double s) const;
    Point2 tangent(double s) const;
    // Appends flattened vertices from start() up to but excluding end().
    void flatten_into(double eps_flat, std::vector<Point2>& out) const;
};

struct Loop {
    std::vector<Edge> edges;

    double length() const;
    Point2 at(double s) const;
    Point2 tangent(double s) const;
    std::vector<Point2> flatten(double eps_flat) const;
};

// An infinite line p + t d with open parameter gaps removed from the boundary.
struct Line2 {
    Point2 p;
    Point2 d;
    std::vector<std::array<double, 2>> gaps;

    Point2 unit() const { return d / norm(d); }
};

// Open half-plane {x : n.x < c}.
struct HalfPlane {
    Point2 n;
    double c = 0.0;
};

enum class DomainKind { bounded, complement, clipped };

std::string to_string(DomainKind k);

struct PlanarDomain {
    DomainKind kind = DomainKind::bounded;
    std::vector<Loop> loops;
    std::vector<std::vector<Point2>> slits;
    std::vector<Line2> lines;
    std::vector<HalfPlane> halfplanes;
    std::vector<Point2> singular_vertices;
    Tolerance tol;

    // Largest absolute coordinate over the finite boundary data (loops, slits, line anchors).
    double max_coordinate() const;
};

struct BoundaryRef {
    enum class Kind { loop, slit, line, halfplane };
    Kind kind = Kind::loop;
    int index = 0;

    std::string str() const;
    static BoundaryRef parse(const std::string& text);
    bool operator==(const BoundaryRef&) const = default;
};

struct BoundaryPoint {
    BoundaryRef ref;
    double s = 0.0;
    Point2 xy;
    // Unit direction pointing into the domain. Distinguishes the two sides of a slit.
    Point2 inward;
};

struct DomainDiagnostics {
    bool is_bounded = false;
    bool is_convex = false;
    bool is_strictly_convex_flag = false;
    bool boundary_collinear = false;
    bool is_halfplane = false;
    int boundary_components = 0;
    bool boundary_single_point = false;
    std::vector<Point2> singular_vertices;
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::vector<std::string>& problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

PlanarDomain load_domain(const std::string& document);
PlanarDomain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const PlanarDomain& d);
std::string serialize_domain(const PlanarDomain& d);

// Runs every invariant check; throws DomainError listing all violations.
void validate_domain(const PlanarDomain& d);

DomainDiagnostics diagnose(const PlanarDomain& d);

// Euclidean distance from p to the symbolic boundary (arcs unflattened).
double boundary_distance(const PlanarDomain& d, const Point2& p);

double boundary_length(const PlanarDomain& d, const BoundaryRef& ref);
BoundaryPoint boundary_point_at(const PlanarDomain& d, const BoundaryRef& ref, double s);
// Nearest boundary point of the given component; on a slit the side facing `inward_hint` wins.
BoundaryPoint locate_boundary_point(const PlanarDomain& d, const BoundaryRef& ref, const Point2& xy,
                                    const Point2& inward_hint = {0.0, 0.0});

// Orientation of a loop as traversed (positive = CCW).
double loop_signed_area(const Loop& loop, double eps_flat);

// Image of a domain under a rigid motion; loops are re-oriented after reflections.
PlanarDomain transform_domain(const PlanarDomain& d, const RigidMotion2& m);

// Polygon helpers shared by several modules.
PlanarDomain make_polygon_domain(const std::vector<Point2>& ccw_vertices);
bool point_in_ring(const Point2& p, std::span<const Point2> ring);  // even-odd crossing test
double ring_distance(const Point2& p, std::span<const Point2> ring);
// Sutherland-Hodgman clip of a convex polygon by the closed half-plane n.x <= c.
std::vector<Point2> clip_convex(const std::vector<Point2>& poly, const HalfPlane& h);
// The clipped-kind region intersected with the square of half-width R around the origin.
std::vector<Point2> clipped_region_polygon(const PlanarDomain& d, double R);
Point2 point_from_json(const nlohmann::json& j);
nlohmann::json json_point(const Point2& p);

}  // namespace relmetric
