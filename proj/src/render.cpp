#include "relmetric/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace relmetric {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string escape(const std::string& t) {
    std::string out;
    for (char c : t) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

const char* kBoundary = "fill:none;stroke:#1f2a44;stroke-width:1.5";
const char* kSlit = "fill:none;stroke:#1f2a44;stroke-width:2";
const char* kPath = "fill:none;stroke:#c0392b;stroke-width:1.5";
const char* kAux = "fill:none;stroke:#7f8c8d;stroke-width:0.75;stroke-dasharray:4 3";

}  // namespace

void SvgDocument::include(const Point2& p) {
    x0_ = std::min(x0_, p.x);
    y0_ = std::min(y0_, p.y);
    x1_ = std::max(x1_, p.x);
    y1_ = std::max(y1_, p.y);
}

void SvgDocument::polyline(const std::vector<Point2>& pts, const std::string& style, bool closed) {
    if (pts.empty()) return;
    for (auto& p : pts) include(p);
    items_.push_back({Item::Kind::poly, {pts}, closed, 0.0, style, {}});
}

void SvgDocument::region(const std::vector<std::vector<Point2>>& rings, const std::string& style) {
    for (auto& r : rings)
        for (auto& p : r) include(p);
    items_.push_back({Item::Kind::region, rings, true, 0.0, style, {}});
}

void SvgDocument::dot(const Point2& c, double radius_px, const std::string& style) {
    include(c);
    items_.push_back({Item::Kind::dot, {{c}}, false, radius_px, style, {}});
}

void SvgDocument::label(const Point2& at, const std::string& text) {
    include(at);
    items_.push_back({Item::Kind::label, {{at}}, false, 0.0, {}, text});
}

std::string SvgDocument::str(int width_px) const {
    double w = std::max(x1_ - x0_, 1e-9), h = std::max(y1_ - y0_, 1e-9);
    double margin = 20.0;
    double scale = (width_px - 2 * margin) / w;
    int height_px = static_cast<int>(std::ceil(h * scale + 2 * margin));
    auto X = [&](double x) { return num(margin + (x - x0_) * scale); };
    auto Y = [&](double y) { return num(margin + (y1_ - y) * scale); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\"" << height_px
       << "\" viewBox=\"0 0 " << width_px << ' ' << height_px << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& it : items_) {
        switch (it.kind) {
            case Item::Kind::poly: {
                os << (it.closed ? "<polygon" : "<polyline") << " points=\"";
                const auto& r = it.rings[0];
                for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << X(r[i].x) << ',' << Y(r[i].y);
                os << "\" style=\"" << it.style << "\"/>\n";
                break;
            }
            case Item::Kind::region: {
                os << "<path fill-rule=\"evenodd\" d=\"";
                for (const auto& r : it.rings) {
                    for (std::size_t i = 0; i < r.size(); ++i)
                        os << (i ? " L" : "M") << X(r[i].x) << ' ' << Y(r[i].y);
                    os << " Z ";
                }
                os << "\" style=\"" << it.style << "\"/>\n";
                break;
            }
            case Item::Kind::dot:
                os << "<circle cx=\"" << X(it.rings[0][0].x) << "\" cy=\"" << Y(it.rings[0][0].y) << "\" r=\""
                   << num(it.radius) << "\" style=\"" << it.style << "\"/>\n";
                break;
            case Item::Kind::label:
                os << "<text x=\"" << X(it.rings[0][0].x) << "\" y=\"" << Y(it.rings[0][0].y)
                   << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(it.text) << "</text>\n";
                break;
        }
    }
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------------------

void draw_domain(SvgDocument& svg, const PlanarDomain& d) {
    double eps = d.tol.eps_flat > 0 ? std::max(d.tol.eps_flat, 1e-4) : 1e-4;
    for (const auto& l : d.loops) svg.polyline(l.flatten(eps), kBoundary, true);
    for (const auto& s : d.slits) svg.polyline(s, kSlit);
    double R = d.max_coordinate() + 2.0;
    for (const auto& l : d.lines) {
        Point2 u = l.unit();
        std::vector<std::array<double, 2>> gaps = l.gaps;
        std::sort(gaps.begin(), gaps.end());
        double from = -R;
        for (const auto& g : gaps) {
            if (g[0] > from) svg.polyline({l.p + u * from, l.p + u * std::min(g[0], R)}, kBoundary);
            from = std::max(from, g[1]);
        }
        if (from < R) svg.polyline({l.p + u * from, l.p + u * R}, kBoundary);
    }
    for (const auto& h : d.halfplanes) {
        double nn = norm(h.n);
        Point2 n = h.n / nn;
        Point2 base = n * (h.c / nn);
        Point2 t{-n.y, n.x};
        svg.polyline({base - t * R, base + t * R}, kBoundary);
        svg.polyline({base - t * (0.5 * R) - n * 0.15, base + t * (0.5 * R) - n * 0.15}, kAux);
    }
    for (const auto& v : d.singular_vertices) svg.dot(v, 3.0, "fill:#e67e22");
}

void draw_path(SvgDocument& svg, const GeodesicPath& p) {
    if (!p.reachable || p.vertices.empty()) return;
    svg.polyline(p.vertices, kPath);
    svg.dot(p.vertices.front(), 2.5, "fill:#c0392b");
    svg.dot(p.vertices.back(), 2.5, "fill:#c0392b");
}

std::string domain_svg(const PlanarDomain& d, const std::vector<GeodesicPath>& paths) {
    SvgDocument svg;
    draw_domain(svg, d);
    for (const auto& p : paths) draw_path(svg, p);
    return svg.str();
}

std::string fu_svg(const PlanarDomain& d, const FuDecomposition& fu) {
    SvgDocument svg;
    for (const auto& poly : fu.U_components) svg.region(poly, "fill:#d6eaf8;stroke:none");
    for (const auto& poly : fu.F_U) svg.region(poly, "fill:#f5cba7;stroke:none");
    if (fu.hull.size() >= 2) svg.polyline(fu.hull, kAux, true);
    draw_domain(svg, d);
    return svg.str();
}

std::string intervals_svg(const PlanarDomain& d, const std::vector<BoundaryInterval>& iv) {
    SvgDocument svg;
    draw_domain(svg, d);
    for (const auto& i : iv)
        svg.polyline({i.x, i.y}, i.maximal ? "fill:none;stroke:#27ae60;stroke-width:1" : kAux);
    return svg.str();
}

std::string angles_svg(const PlanarDomain& d, const std::vector<BoundaryAngle>& angles) {
    SvgDocument svg;
    draw_domain(svg, d);
    for (const auto& a : angles) {
        svg.polyline({a.x, a.y, a.z}, "fill:none;stroke:#8e44ad;stroke-width:1");
        svg.dot(a.y, 2.5, "fill:#8e44ad");
    }
    return svg.str();
}

std::string obstacle_svg(const ObstacleTriangle& t, const AvoidingPath* path) {
    SvgDocument svg;
    svg.polyline({t.O, t.A * 4.0, t.D * 4.0}, kAux, true);
    svg.polyline({t.O, t.A, t.D}, kBoundary, true);
    for (const auto& s : t.segments) svg.polyline({s.x, s.y}, "fill:none;stroke:#1f2a44;stroke-width:0.6");
    if (path) {
        if (path->inner_radius > 0) {
            std::vector<Point2> ring;
            for (int i = 0; i < 256; ++i) {
                double a = 2 * std::numbers::pi * i / 256;
                ring.push_back({path->inner_radius * std::cos(a), path->inner_radius * std::sin(a)});
            }
            svg.polyline(ring, "fill:#ecf0f1;stroke:#7f8c8d;stroke-width:0.75", true);
        }
        draw_path(svg, path->path);
    }
    svg.label(t.A, "A");
    svg.label(t.D, "D");
    svg.label(t.O, "O");
    return svg.str();
}

std::string labyrinth_svg(const SpiralStrip& s, int samples_per_coil, const LabyrinthResult& r) {
    SvgDocument svg;
    std::vector<Point2> wall;
    int n = samples_per_coil * s.coils;
    for (int i = 0; i <= n; ++i) wall.push_back(s.plane_point(2 * std::numbers::pi * i / samples_per_coil));
    svg.polyline(wall, kBoundary);
    if (!r.path.empty()) svg.polyline(r.path, kPath);
    svg.dot({0.0, 0.0}, 2.0, "fill:#7f8c8d");
    return svg.str();
}

std::string bend_svg(const BendPair& b) {
    SvgDocument svg;
    double eps = 1e-3;
    for (const auto& l : b.U.loops) svg.polyline(l.flatten(eps), kBoundary, true);
    for (const auto& l : b.V.loops) svg.polyline(l.flatten(eps), "fill:none;stroke:#c0392b;stroke-width:1", true);
    svg.dot(b.P, 2.5, "fill:#e67e22");
    return svg.str();
}

std::string profiles_svg(const ConvexProfile& p, const BendSolution* s) {
    SvgDocument svg;
    const int n = 2000;
    std::vector<Point2> g1, g2;
    for (int i = 0; i <= n; ++i) {
        double x = p.a_star * i / n;
        g1.push_back({x, p.f(x)});
    }
    svg.polyline(g1, kBoundary);
    for (const auto& seg : p.segments)
        svg.polyline({{seg[0], p.f(seg[0])}, {seg[1], p.f(seg[1])}}, "fill:none;stroke:#27ae60;stroke-width:3");
    if (s) {
        BentProfile b = s->profile(p);
        double amp = s->sup_dist > 0 ? 0.05 * p.f(p.a_star) / s->sup_dist : 1.0;
        // f1 + amp (f2 - f1): the difference is invisible at true scale
        for (int i = 0; i <= n; ++i) {
            double x = p.a_star * i / n;
            g2.push_back({x, p.f(x) + amp * (b.f(x) - p.f(x))});
        }
        svg.polyline(g2, kPath);
        for (double x : s->x_points.x) svg.dot({x, p.f(x)}, 3.0, "fill:#8e44ad");
        std::ostringstream os;
        os << "difference magnified " << num(amp);
        svg.label({0.0, p.f(p.a_star)}, os.str());
    }
    return svg.str();
}

std::string cardioid_svg(const CardioidSolid& c) {
    SvgDocument svg;
    svg.polyline(c.profile, kBoundary);
    std::vector<Point2> mirror;
    for (const auto& p : c.profile) mirror.push_back({-p.x, p.y});
    svg.polyline(mirror, kBoundary);
    svg.dot(c.profile[c.splice_index], 3.0, "fill:#e67e22");
    return svg.str();
}

}  // namespace relmetric
