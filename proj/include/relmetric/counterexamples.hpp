#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relmetric/domain.hpp"
#include "relmetric/geodesic.hpp"
#include "relmetric/rigidity.hpp"

namespace relmetric {

// ---------------------------------------------------------------------------
// Comb

struct CombDomain {
    int depth = 1;
    PlanarDomain domain;
    Point2 tip{0.0, 0.0};
    Point2 target{1.0, 2.0};
};

// Throws std::invalid_argument for n < 1.
CombDomain gen_comb(int n);
// Teeth removed: the quadrilateral 0, (1/2,0), (1,1), (1,2).
PlanarDomain convexified_comb();

struct ProbeSequence {
    std::vector<int> depth;
    std::vector<double> distance;
    std::vector<double> difference;  // difference[i] = distance[i+1] - distance[i]
    bool strictly_increasing = false;
    double min_difference = 0.0;
};

// Distance from (2^-n, 0) to (1, 2) for n in [n_min, n_max].
ProbeSequence comb_divergence_probe(int n_min, int n_max);
ProbeSequence convexified_probe(int n_min, int n_max);

// ---------------------------------------------------------------------------
// Obstacle triangle

struct ObstacleSegment {
    int level = 1;
    int k = 1;
    double angle = 0.0;
    Point2 x, y;  // y = 11 x
};

struct ObstacleTriangle {
    Point2 A{1.0, 0.0};
    Point2 O{0.0, 0.0};
    Point2 D;
    int depth = 0;
    std::vector<int> counts;  // counts[j-1] = floor((2 pi)^j)
    std::vector<ObstacleSegment> segments;
};

long long level_count(int j);
// 0 <= J <= 5. Throws std::invalid_argument otherwise.
ObstacleTriangle gen_obstacle_triangle(int J);
// Exhaustive pairwise test; returns the first intersecting pair, if any.
std::optional<std::pair<int, int>> first_intersecting_pair(const ObstacleTriangle& t);

struct AvoidingPath {
    bool reachable = false;
    GeodesicPath path;
    double length = 0.0;
    double inner_radius = 0.0;
    int slit_count = 0;   // obstacles strictly inside the region
    int notch_count = 0;  // obstacles reaching the disk or the far side, extended past it
    std::string note;
};

// Region 4*triangle(AOD) minus the inscribed 256-gon of radius r around O.
AvoidingPath shortest_avoiding_path(const ObstacleTriangle& scene, double r);
PlanarDomain avoiding_region(const ObstacleTriangle& scene, double r, int* slits = nullptr, int* notches = nullptr);

// ---------------------------------------------------------------------------
// Spiral strips

struct Mesh {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 3>> faces;
};

struct MeshReport {
    bool edge_manifold = false;  // every edge has one or two incident faces
    bool closed = false;         // every edge has exactly two
    bool oriented = false;       // shared edges traversed in opposite directions
    int degenerate_faces = 0;
    int euler_characteristic = 0;
    int boundary_edges = 0;
};

MeshReport inspect_mesh(const Mesh& m);
std::string mesh_to_obj(const std::vector<Mesh>& meshes, const std::vector<std::string>& names = {});

// Axis OA is the x-axis, the plane AOD is z = 0.
struct SpiralStrip {
    int level = 1;
    int k = 1;
    double phi = 0.0;    // angle of the ray carrying x^k_j
    double c = 0.0;      // position of the generating plane along OA
    double rho0 = 0.0;   // distance from x^k_j to OA
    double eps = 0.0;    // pitch: rho(psi) = rho0 - eps psi
    int coils = 1;
    double shrink = 0.0;  // 2 pi coils eps / rho0

    double rho(double psi) const { return rho0 - eps * psi; }
    // Point x(psi) in the generating plane, as plane coordinates (y, z).
    Point2 plane_point(double psi) const;
    Point3 point(double psi, double lambda = 1.0) const;
};

struct SpiralScene {
    int depth = 1;
    int samples_per_coil = 16;
    std::vector<int> coils;       // M_j
    std::vector<double> shrink;   // per level
    std::vector<SpiralStrip> strips;
};

struct LabyrinthResult {
    double length = 0.0;         // exact shortest entrance-to-exit path in the plane
    double inner_wall_length = 0.0;  // length of the inner wall polyline
    std::vector<Point2> path;
    int nodes = 0;
    bool passed = false;
};

// Shortest plane path between the first coil segment [x(0), x(2pi)] and the last one,
// avoiding the polygonal spiral.
LabyrinthResult labyrinth_check(const SpiralStrip& s, int samples_per_coil, double target = 10.0);
// General free-space engine on walls inset by 1e-4 of the coil gap, no sweep window; quadratic cost.
LabyrinthResult labyrinth_check_reference(const SpiralStrip& s, int samples_per_coil, double target = 10.0);

struct SpiralOptions {
    std::vector<int> coils;        // empty: doubling search per level
    std::vector<double> shrink;    // empty: half of the tightest band gap per level
    int samples_per_coil = 16;
    double labyrinth_target = 10.0;
};

// Throws std::invalid_argument when J is out of [1, 2] or when two strips intersect.
SpiralScene gen_spiral_scene(int J, const SpiralOptions& opts = {});

Mesh strip_mesh(const SpiralStrip& s, int samples_per_coil);
// Exact test of the closed segment [p, q] against the strip surface.
bool segment_hits_strip(const SpiralStrip& s, int samples_per_coil, const Point3& p, const Point3& q);
bool triangles_intersect(const std::array<Point3, 3>& a, const std::array<Point3, 3>& b);

struct DisjointnessReport {
    bool band_certificate = false;  // nested-cone argument covers every pair
    bool triangle_test_run = false;
    bool triangle_disjoint = false;
    long long triangle_pairs_tested = 0;
    long long triangle_count = 0;
    std::optional<std::pair<int, int>> first_colliding;  // strip indices
};

// Triangle tests run when the scene has at most max_triangles triangles.
DisjointnessReport check_strips_disjoint(const SpiralScene& scene, long long max_triangles = 200000);

// Minimum over 10^4 samples of the clearance test on ]O,A] and ]O,D].
bool probe_segments_clear(const SpiralScene& scene, int samples = 10000);

struct GeodesicLevel {
    int level = 0;
    int depth = 0;
    double exclusion_radius = 0.0;
    int shells_per_octave = 0;
    int nodes = 0;
    long long edges = 0;
    double d_AO = 0.0, d_OD = 0.0, d_AD = 0.0;
    bool connected = false;
};

struct Geodesic3DOptions {
    int shells_per_octave = 8;
    int cone_rings = 8;
    double outer_radius = 6.5;
    bool with_strips = true;
};

// Graph upper bounds at obstacle depth J = 1..levels on a common lattice.
std::vector<GeodesicLevel> estimate_3d_geodesics(const std::vector<SpiralScene>& scenes,
                                                 const Geodesic3DOptions& opts = {});
GeodesicLevel estimate_3d_level(const SpiralScene& scene, int level, const Geodesic3DOptions& opts);

// ---------------------------------------------------------------------------
// Bend pair

struct BendPair {
    double l = 1.0;
    double radius = 0.0;  // 2 l / pi
    Point2 P;             // (-radius, radius)
    PlanarDomain U, V;
    BoundaryCorrespondence correspondence;
    // Image of a boundary point (x, 0) of U.
    Point2 map(double x) const;
    double inverse_map(const Point2& q) const;
};

// Throws std::invalid_argument for l <= 0.
BendPair gen_bend_pair(double l);

// ---------------------------------------------------------------------------
// Cardioid solid

struct CardioidSolid {
    int facets = 16;
    std::vector<Point2> profile;  // (x, z) from the top pole to the bottom pole
    int splice_index = 0;         // profile index of the junction point
    Mesh mesh;
};

double cardioid_residual(const Point2& xz);  // x^2 + z^2 - sqrt(x^2 + z^2) + z
// Throws std::invalid_argument for m < 16.
CardioidSolid gen_cardioid_solid(int m, int profile_samples = 64);

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ProbeSequence& p);
nlohmann::json to_json(const ObstacleTriangle& t);
nlohmann::json to_json(const AvoidingPath& p);
nlohmann::json to_json(const SpiralScene& s);
nlohmann::json to_json(const LabyrinthResult& r);
nlohmann::json to_json(const DisjointnessReport& r);
nlohmann::json to_json(const GeodesicLevel& g);
nlohmann::json to_json(const MeshReport& r);
nlohmann::json to_json(const CardioidSolid& c);

}  // namespace relmetric
