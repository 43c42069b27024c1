#pragma once

#include <string>
#include <vector>

#include "relmetric/boundary_struct.hpp"
#include "relmetric/counterexamples.hpp"
#include "relmetric/deformation_solver.hpp"
#include "relmetric/domain.hpp"
#include "relmetric/geodesic.hpp"

namespace relmetric {

// Plane drawing in world coordinates; the viewBox is fitted on output.
class SvgDocument {
public:
    void polyline(const std::vector<Point2>& pts, const std::string& style, bool closed = false);
    // Rings filled with the even-odd rule.
    void region(const std::vector<std::vector<Point2>>& rings, const std::string& style);
    void dot(const Point2& c, double radius_px, const std::string& style);
    void label(const Point2& at, const std::string& text);
    // Grows the fitted area without drawing.
    void include(const Point2& p);
    bool empty() const { return items_.empty(); }
    std::string str(int width_px = 800) const;

private:
    struct Item {
        enum class Kind { poly, region, dot, label } kind;
        std::vector<std::vector<Point2>> rings;
        bool closed = false;
        double radius = 0.0;
        std::string style, text;
    };
    std::vector<Item> items_;
    double x0_ = 1e300, y0_ = 1e300, x1_ = -1e300, y1_ = -1e300;
};

// Boundary loops, slits, lines and half-plane edges, clipped to a box around the finite data.
void draw_domain(SvgDocument& svg, const PlanarDomain& d);
void draw_path(SvgDocument& svg, const GeodesicPath& p);

std::string domain_svg(const PlanarDomain& d, const std::vector<GeodesicPath>& paths = {});
std::string fu_svg(const PlanarDomain& d, const FuDecomposition& fu);
std::string intervals_svg(const PlanarDomain& d, const std::vector<BoundaryInterval>& iv);
std::string angles_svg(const PlanarDomain& d, const std::vector<BoundaryAngle>& angles);
std::string obstacle_svg(const ObstacleTriangle& t, const AvoidingPath* path = nullptr);
std::string labyrinth_svg(const SpiralStrip& s, int samples_per_coil, const LabyrinthResult& r);
std::string bend_svg(const BendPair& b);
std::string profiles_svg(const ConvexProfile& p, const BendSolution* s = nullptr);
std::string cardioid_svg(const CardioidSolid& c);

}  // namespace relmetric
