#pragma once

#include <optional>
#include <vector>

#include "relmetric/domain.hpp"
#include "relmetric/geodesic.hpp"

namespace relmetric {

struct BoundaryInterval {
    Point2 x, y;
    bool maximal = false;
};

struct BoundaryAngle {
    Point2 x, y, z;
    double radius_witness = 0.0;
};

struct GammaSet {
    BoundaryAngle angle;
    std::vector<Point2> E;  // convex polygon, CCW; may degenerate to a segment
    std::vector<Point2> members;
};

struct FuDecomposition {
    std::vector<Point2> hull;  // conv of the boundary within the working box
    bool hull_degenerate = false;
    std::vector<std::vector<std::vector<Point2>>> F_U;  // polygons as rings (outer first)
    int F_components = 0;
    int boundary_F_components = 0;
    std::vector<std::vector<std::vector<Point2>>> U_components;
    double box_half_width = 0.0;
    double F_area = 0.0;
};

// Membership and boundary predicates on the polygonal model of a domain.
class DomainProbe {
public:
    explicit DomainProbe(const PlanarDomain& d, double box_half_width = 0.0);

    const PlanarDomain& domain() const { return *domain_; }
    const FreeSpace& space() const { return space_; }
    double box_half_width() const { return box_; }
    double eps() const { return eps_; }

    bool on_boundary(const Point2& p) const;
    bool in_open(const Point2& p) const;
    // The open segment ]a, b[ lies in U.
    bool open_segment_in(const Point2& a, const Point2& b) const;
    // First boundary contact along the ray p + t u, t > eps; infinity if none inside the box.
    double ray_hit(const Point2& p, const Point2& u) const;

private:
    const PlanarDomain* domain_;
    double box_;
    FreeSpace space_;
    double eps_;
};

bool is_boundary_interval(const PlanarDomain& d, const Point2& a, const Point2& b);
bool is_boundary_interval(const DomainProbe& probe, const Point2& a, const Point2& b);

// Candidate endpoints: flattened vertices, plus k arclength samples per boundary edge.
std::vector<Point2> boundary_candidates(const PlanarDomain& d, int samples_per_edge = 0);

std::vector<BoundaryInterval> enumerate_boundary_intervals(const PlanarDomain& d, int samples_per_edge = 0);
std::vector<BoundaryInterval> enumerate_boundary_intervals(const DomainProbe& probe,
                                                           const std::vector<Point2>& endpoints);

std::optional<BoundaryAngle> detect_boundary_angle(const PlanarDomain& d, const Point2& x, const Point2& y,
                                                   const Point2& z);
std::optional<BoundaryAngle> detect_boundary_angle(const DomainProbe& probe, const Point2& x, const Point2& y,
                                                   const Point2& z);

GammaSet gamma_set(const PlanarDomain& d, const BoundaryAngle& angle, const std::vector<Point2>& candidates);

FuDecomposition decompose_Fu(const PlanarDomain& d);

// Joinable: some z1 in ]x1,y1[ and z2 in ]x2,y2[ have [z1, z2] inside U.
bool intervals_joinable(const DomainProbe& probe, const BoundaryInterval& a, const BoundaryInterval& b,
                        int samples = 9);
// Class labels of the transitive closure of joinability.
std::vector<int> interval_equivalence_classes(const DomainProbe& probe, const std::vector<BoundaryInterval>& iv);
// Index of the U_i whose closure contains the interval, or -1.
int interval_component(const FuDecomposition& fu, const BoundaryInterval& iv, double tol = 1e-9);

nlohmann::json to_json(const BoundaryInterval& iv);
nlohmann::json to_json(const BoundaryAngle& a);
nlohmann::json to_json(const FuDecomposition& fu);

}  // namespace relmetric
