#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace relmetric {

// Piecewise quadratic C1 convex profile on [0, a_star]. Piece i covers [knots[i], knots[i+1]]
// with f = value[i] + slope[i] (x - knots[i]) + curvature[i] (x - knots[i])^2 / 2.
struct ConvexProfile {
    double a_star = 1.0;
    int stage = 1;
    std::uint64_t seed = 0;
    std::vector<double> knots;
    std::vector<double> value;      // f at knots, one per knot
    std::vector<double> slope;      // f' at knots, one per knot
    std::vector<double> curvature;  // f'' per piece, 0 on affine pieces
    std::vector<std::array<double, 2>> segments;  // maximal affine intervals, left to right
    std::string density_note;

    std::size_t piece(double x) const;
    double f(double x) const;
    double df(double x) const;
    // Largest slope jump and value jump across interior knots.
    double c1_defect() const;
};

// Cells accumulate at 0 and a_star with ratio 0.8; stage + 1 cells on each side.
// Every cell is arc, segment, arc with widths 1/2, 1/4, 1/4. Throws for stage < 1.
ConvexProfile build_profile(int stage, std::uint64_t seed = 0);

struct XPoints {
    std::array<double, 3> x{};
    bool cond_end = false;   // a* - x3 < f(x3) / f'(x3)
    bool cond_pair = false;  // x2 - x1 < f(x1) / f'(x1)
};

XPoints check_x_points(const ConvexProfile& p, const std::array<double, 3>& x);
// Segment left endpoints meeting both conditions, best conditioned Jacobian first.
// Throws std::runtime_error if no triple qualifies.
XPoints choose_x_points(const ConvexProfile& p);

// Second profile of the four-branch family built on f1 with coefficients k.
struct BentProfile {
    const ConvexProfile* f1 = nullptr;
    std::array<double, 4> k{1, 1, 1, 1};
    std::array<double, 3> x{};

    int branch(double t) const;  // 0..3
    double f(double t) const;
    double df(double t) const;
    // Break points of the piecewise quadratic f2: profile knots plus x points.
    std::vector<double> breaks() const;
    // max |f2 - f1| over [0, a*], exact per quadratic piece.
    double sup_distance() const;
    // Largest value or slope jump between neighbouring branches at x1, x2, x3.
    double c1_defect() const;
};

// Residuals of the endpoint value, endpoint slope and total length conditions.
std::array<double, 3> system_residual(const ConvexProfile& p, const std::array<double, 4>& k,
                                      const std::array<double, 3>& x);

struct JacobianReport {
    // Rows: length condition, endpoint value, endpoint slope. Columns k1..k4.
    std::array<std::array<double, 4>, 3> N{};
    std::array<double, 3> singular_values{};
    int rank = 0;
    double condition_ratio = 0.0;  // sigma3 / sigma1
    std::vector<std::string> warnings;
};

// Closed-form entries at k = (1, 1, 1, 1).
JacobianReport jacobian(const ConvexProfile& p, const std::array<double, 3>& x);
// Derivative of system_residual at arbitrary k, rows in residual order.
std::array<std::array<double, 4>, 3> residual_jacobian(const ConvexProfile& p, const std::array<double, 4>& k,
                                                       const std::array<double, 3>& x);

// Arclength of f1 (which = 1) or f2 (which = 2) from 0 to x, adaptive quadrature per piece.
double arclength(const BentProfile& b, int which, double x);

struct PhiMap {
    double a_star = 1.0;
    double total_length = 0.0;
    std::vector<double> nodes;  // x, uniform
    std::vector<double> phi;    // phi(x)
    std::vector<double> breaks;            // common subdivision of both arclength tables
    std::vector<double> cum1, cum2;        // arclengths of f1 and f2 at the breaks
    // Exact solve of s1(phi) = s2(x), started from the table.
    double at(const BentProfile& b, double x) const;
    double inverse(const BentProfile& b, double y) const;
};

// Throws std::runtime_error when the two total lengths differ by more than 1e-9.
PhiMap compute_phi(const BentProfile& b, int nodes = 1001);

struct BendSolution {
    std::array<double, 4> k{1, 1, 1, 1};
    XPoints x_points;
    std::array<double, 3> residual{};
    double residual_norm = 0.0;
    double sup_dist = 0.0;
    double step = 0.0;  // branch parameter t, k = 1 + t n after correction
    std::array<double, 4> null_direction{};
    int fixed_coordinate = 0;
    int halvings = 0;
    int newton_iterations = 0;
    double c1_defect = 0.0;
    double end_slope_error = 0.0;  // f2'(a*) - f1'(a*)
    double end_value_error = 0.0;
    JacobianReport jac;
    PhiMap phi;

    BentProfile profile(const ConvexProfile& p) const { return {&p, k, x_points.x}; }
};

// Null-direction step from (1, 1, 1, 1) with damped Newton correction. Throws
// std::runtime_error("branch step failed") after 40 halvings.
BendSolution solve_bend(const ConvexProfile& p, double epsilon, const XPoints& x);

struct SegmentImage {
    double a = 0.0, b = 0.0;              // segment of the first graph, x range
    double image_a = 0.0, image_b = 0.0;  // x range of its image on the second graph
    double length = 0.0, image_length = 0.0;
    double deviation = 0.0;  // max distance of the image from its chord
    bool straight = false;
};

struct IsometryFReport {
    int samples = 0;
    double max_arclength_error = 0.0;
    double max_deviation = 0.0;
    int straight_segments = 0;
    std::vector<SegmentImage> segments;
};

IsometryFReport verify_isometry_F(const ConvexProfile& p, const BendSolution& s, std::uint64_t seed = 0,
                                  int samples = 100);

nlohmann::json to_json(const ConvexProfile& p);
nlohmann::json to_json(const XPoints& x);
nlohmann::json to_json(const JacobianReport& j);
nlohmann::json to_json(const PhiMap& m);
nlohmann::json to_json(const BendSolution& s);
nlohmann::json to_json(const IsometryFReport& r);

}  // namespace relmetric
