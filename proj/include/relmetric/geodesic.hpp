#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "relmetric/domain.hpp"

namespace relmetric {

enum class PieceLocation { interior, boundary };

struct PathPiece {
    Segment2 seg;
    PieceLocation location = PieceLocation::interior;
};

struct GeodesicPath {
    std::vector<Point2> vertices;
    double length = 0.0;
    std::vector<PathPiece> pieces;
    Point2 from;
    Point2 to;
    bool reachable = true;

    static GeodesicPath unreachable(const Point2& p, const Point2& q);
};

// A query endpoint. `inward` selects a side when the point sits on a slit.
struct QueryPoint {
    Point2 xy;
    std::optional<Point2> inward;
};

// Closed polygonal free space: an optional outer ring, holes, and slit polylines.
// Built once per domain and box; answers segment-admissibility queries.
class FreeSpace {
public:
    struct BEdge {
        Point2 a, b;
        int owner;  // ring index, or -(slit index + 1)
        int index;  // position along the owner
    };

    FreeSpace(const PlanarDomain& d, double box_half_width, double eps_flat);

    bool has_outer() const { return has_outer_; }
    const std::vector<std::vector<Point2>>& rings() const { return rings_; }
    const std::vector<std::vector<Point2>>& slits() const { return slits_; }
    double eps() const { return eps_; }

    bool in_closure(const Point2& p) const;
    double distance_to_boundary(const Point2& p) const;
    Point2 nearest_boundary_point(const Point2& p) const;
    // True iff the closed segment [u, v] is a limit of curves inside the open domain.
    bool segment_admissible(const Point2& u, const Point2& v) const;
    // Sorted parameters in (0, 1) where boundary vertices touch the open segment.
    std::vector<double> touch_params(const Point2& u, const Point2& v) const;

    const std::vector<BEdge>& edges() const { return edges_; }
    // Indices of edges whose grid cells meet the bounding box of [u, v].
    void candidates(const Point2& u, const Point2& v, std::vector<int>& out) const;

private:
    void build_grid();
    bool slit_run_crosses(const Point2& u, const Point2& v, int slit, int vertex) const;

    bool has_outer_ = false;
    std::vector<std::vector<Point2>> rings_;  // rings_[0] is the outer ring when has_outer_
    std::vector<std::vector<Point2>> slits_;
    std::vector<BEdge> edges_;
    double eps_ = 1e-12;

    double gx0_ = 0, gy0_ = 0, cell_ = 1;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> grid_;
};

struct EngineOptions {
    double box_half_width = 0.0;  // 0: derive from the domain alone
    double eps_flat = 0.0;        // 0: domain tolerance
};

class GeodesicEngine {
public:
    GeodesicEngine(const PlanarDomain& d, EngineOptions opts = {});

    // Box large enough for every geodesic between the given points.
    static double box_for(const PlanarDomain& d, const std::vector<Point2>& pts);

    GeodesicPath shortest_path(const QueryPoint& p, const QueryPoint& q) const;
    double distance(const QueryPoint& p, const QueryPoint& q) const { return shortest_path(p, q).length; }
    double box_half_width() const { return box_; }
    const FreeSpace& free_space() const { return space_; }
    std::size_t node_count() const { return nodes_.size(); }

    QueryPoint query_for(const BoundaryPoint& bp) const;

private:
    struct Sector {
        bool full = true;
        Point2 from, to;  // admissible directions sweep CCW from `from` to `to`
        bool contains(const Point2& d) const;
    };
    struct Node {
        Point2 p;
        Sector sector;
    };

    Point2 snap(const Point2& p) const;
    Sector query_sector(const QueryPoint& q) const;
    void classify_pieces(GeodesicPath& path) const;

    const PlanarDomain* domain_;
    double box_;
    FreeSpace space_;
    std::vector<Node> nodes_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
};

GeodesicPath shortest_path(const PlanarDomain& d, const Point2& p, const Point2& q);

struct RelativeDistance {
    double distance = 0.0;
    GeodesicPath path;
    double refinement_delta = std::numeric_limits<double>::quiet_NaN();
    // Truncation sequence used at declared singular vertices: (arclength offset, distance).
    std::vector<std::pair<double, double>> truncation;
};

RelativeDistance relative_boundary_distance(const PlanarDomain& d, const BoundaryPoint& a, const BoundaryPoint& b,
                                            bool certify = false);

struct MetricReport {
    int sampled_triples = 0;
    double max_triangle_violation = 0.0;
    double max_symmetry_violation = 0.0;
    double max_identity_violation = 0.0;
};

MetricReport verify_metric_axioms(const PlanarDomain& d, int sample_count, std::uint64_t seed);

bool check_h_structure(const GeodesicPath& path, const PlanarDomain& d);

struct ConditionIReport {
    Point2 probe;
    double sup_distance = 0.0;
    bool finite = true;
    int samples = 0;
};

std::vector<ConditionIReport> check_condition_i(const PlanarDomain& d, const std::vector<Point2>& probes,
                                                int boundary_samples = 64);

nlohmann::json path_to_json(const GeodesicPath& p);

}  // namespace relmetric
