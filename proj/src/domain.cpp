#include "relmetric/domain.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace relmetric {

using nlohmann::json;

Point2 Edge::at(double s) const {
    if (type == Type::seg) {
        double len = seg.length();
        return len > 0.0 ? seg.at(s / len) : seg.a;
    }
    return arc.at_length(s);
}

void Edge::flatten_into(double eps_flat, std::vector<Point2>& out) const {
    if (type == Type::seg) {
        out.push_back(seg.a);
        return;
    }
    auto pts = arc.flatten(eps_flat);
    out.insert(out.end(), pts.begin(), pts.end() - 1);
}

double Loop::length() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.length();
    return s;
}

namespace {

double wrap_param(double s, double period) {
    if (!(period > 0.0)) return 0.0;
    double r = std::fmod(s, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

// Locates the edge holding arclength s; returns index and local offset.
std::pair<std::size_t, double> locate(const Loop& loop, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < loop.edges.size(); ++i) {
        double len = loop.edges[i].length();
        if (s < acc + len || i + 1 == loop.edges.size()) return {i, std::min(s - acc, len)};
        acc += len;
    }
    return {0, 0.0};
}

Point2 edge_tangent(const Edge& e, double s) {
    if (e.type == Edge::Type::seg) {
        Point2 d = e.seg.b - e.seg.a;
        double n = norm(d);
        return n > 0 ? d / n : Point2{1, 0};
    }
    return e.arc.tangent_at_length(s);
}

Point2 left_normal(const Point2& t) { return {-t.y, t.x}; }

}  // namespace

Point2 Edge::tangent(double s) const { return edge_tangent(*this, s); }

Point2 Loop::at(double s) const {
    if (edges.empty()) throw std::out_of_range("empty loop");
    auto [i, off] = locate(*this, wrap_param(s, length()));
    return edges[i].at(off);
}

Point2 Loop::tangent(double s) const {
    if (edges.empty()) throw std::out_of_range("empty loop");
    auto [i, off] = locate(*this, wrap_param(s, length()));
    return edge_tangent(edges[i], off);
}

std::vector<Point2> Loop::flatten(double eps_flat) const {
    std::vector<Point2> out;
    for (const auto& e : edges) e.flatten_into(eps_flat, out);
    return out;
}

std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::bounded: return "bounded";
        case DomainKind::complement: return "complement";
        case DomainKind::clipped: return "clipped";
    }
    return "?";
}

double PlanarDomain::max_coordinate() const {
    double m = 0.0;
    auto take = [&](const Point2& p) { m = std::max({m, std::abs(p.x), std::abs(p.y)}); };
    for (const auto& l : loops)
        for (const auto& e : l.edges) {
            if (e.type == Edge::Type::seg) {
                take(e.seg.a);
                take(e.seg.b);
            } else {
                take(e.arc.center + Point2{e.arc.radius, e.arc.radius});
                take(e.arc.center - Point2{e.arc.radius, e.arc.radius});
            }
        }
    for (const auto& s : slits)
        for (const auto& p : s) take(p);
    for (const auto& l : lines) take(l.p);
    for (const auto& h : halfplanes) {
        double n2 = dot(h.n, h.n);
        if (n2 > 0) take(h.n * (h.c / n2));
    }
    for (const auto& p : singular_vertices) take(p);
    return m;
}

BoundaryPoint locate_boundary_point(const PlanarDomain& d, const BoundaryRef& ref, const Point2& xy,
                                    const Point2& hint) {
    double best_s = 0.0, best_d = std::numeric_limits<double>::infinity();
    auto consider = [&](double s, const Point2& p) {
        double dd = distance(p, xy);
        if (dd < best_d) {
            best_d = dd;
            best_s = s;
        }
    };
    switch (ref.kind) {
        case BoundaryRef::Kind::loop: {
            const Loop& loop = d.loops.at(ref.index);
            double acc = 0.0;
            for (const auto& e : loop.edges) {
                if (e.type == Edge::Type::seg) {
                    double t = std::clamp(project_param(xy, e.seg.a, e.seg.b), 0.0, 1.0);
                    consider(acc + t * e.length(), e.seg.at(t));
                } else {
                    Point2 v = xy - e.arc.center;
                    double sw = e.arc.sweep();
                    double rel = std::atan2(v.y, v.x) - e.arc.a0;
                    if (sw < 0) rel = -rel;
                    rel = std::fmod(rel, 2 * kPi);
                    if (rel < 0) rel += 2 * kPi;
                    double L = e.length();
                    if (rel <= std::abs(sw)) consider(acc + rel * e.arc.radius, e.arc.at_length(rel * e.arc.radius));
                    consider(acc, e.start());
                    consider(acc + L, e.end());
                }
                acc += e.length();
            }
            break;
        }
        case BoundaryRef::Kind::slit: {
            const auto& pts = d.slits.at(ref.index);
            double total = boundary_length(d, ref), acc = 0.0;
            if (pts.size() == 1) return boundary_point_at(d, ref, 0.0);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                double len = distance(pts[i], pts[i + 1]);
                double t = std::clamp(project_param(xy, pts[i], pts[i + 1]), 0.0, 1.0);
                double u = acc + t * len;
                Point2 p = pts[i] + (pts[i + 1] - pts[i]) * t;
                double dd = distance(p, xy);
                if (dd < best_d - 1e-15) {
                    best_d = dd;
                    // Front side has the left normal; pick the side facing the hint.
                    Point2 tg = (pts[i + 1] - pts[i]) / len;
                    best_s = dot(left_normal(tg), hint) >= 0 ? u : total - u;
                }
                acc += len;
            }
            break;
        }
        case BoundaryRef::Kind::line: {
            const auto& l = d.lines.at(ref.index);
            best_s = dot(xy - l.p, l.unit());
            break;
        }
        case BoundaryRef::Kind::halfplane: {
            const auto& h = d.halfplanes.at(ref.index);
            double nn = norm(h.n);
            Point2 foot = h.n * (h.c / (nn * nn));
            best_s = dot(xy - foot, Point2{-h.n.y, h.n.x} / nn);
            break;
        }
    }
    return boundary_point_at(d, ref, best_s);
}

PlanarDomain transform_domain(const PlanarDomain& d, const RigidMotion2& m) {
    PlanarDomain out = d;
    auto map_angle = [&](double a) { return (m.reflect ? -a : a) + m.angle; };
    for (auto& loop : out.loops) {
        for (auto& e : loop.edges) {
            if (e.type == Edge::Type::seg) {
                e.seg = {m.apply(e.seg.a), m.apply(e.seg.b)};
            } else {
                double sw = e.arc.sweep();
                e.arc.center = m.apply(e.arc.center);
                e.arc.a0 = map_angle(e.arc.a0);
                e.arc.ccw = m.reflect ? !e.arc.ccw : e.arc.ccw;
                e.arc.a1 = e.arc.a0 + (m.reflect ? -sw : sw);
            }
        }
        if (m.reflect) {
            std::reverse(loop.edges.begin(), loop.edges.end());
            for (auto& e : loop.edges) {
                if (e.type == Edge::Type::seg) {
                    std::swap(e.seg.a, e.seg.b);
                } else {
                    double sw = e.arc.sweep();
                    e.arc.a0 = e.arc.a0 + sw;
                    e.arc.a1 = e.arc.a0 - sw;
                    e.arc.ccw = !e.arc.ccw;
                }
            }
        }
    }
    for (auto& s : out.slits)
        for (auto& p : s) p = m.apply(p);
    for (auto& l : out.lines) {
        l.p = m.apply(l.p);
        l.d = m.apply_vector(l.d);
    }
    for (auto& h : out.halfplanes) {
        h.n = m.apply_vector(h.n);
        h.c = h.c + dot(h.n, m.translation);
    }
    for (auto& v : out.singular_vertices) v = m.apply(v);
    return out;
}

std::string BoundaryRef::str() const {
    switch (kind) {
        case Kind::loop: return "loop" + std::to_string(index);
        case Kind::slit: return "slit" + std::to_string(index);
        case Kind::line: return "line" + std::to_string(index);
        case Kind::halfplane: return "hp" + std::to_string(index);
    }
    return "?";
}

BoundaryRef BoundaryRef::parse(const std::string& text) {
    static const std::pair<const char*, Kind> prefixes[] = {
        {"loop", Kind::loop}, {"slit", Kind::slit}, {"line", Kind::line}, {"hp", Kind::halfplane}};
    for (const auto& [pre, kind] : prefixes) {
        std::string p(pre);
        if (text.rfind(p, 0) == 0 && text.size() > p.size()) {
            std::string rest = text.substr(p.size());
            if (!std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; }))
                break;
            return {kind, std::stoi(rest)};
        }
    }
    throw std::invalid_argument("bad boundary reference: " + text);
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
    return s;
}

}  // namespace

DomainError::DomainError(const std::vector<std::string>& problems)
    : std::runtime_error(join(problems)), problems_(problems) {}

Point2 point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw DomainError({"schema: point must be [x, y]"});
    Point2 p{j[0].get<double>(), j[1].get<double>()};
    if (!is_finite(p)) throw DomainError({"schema: non-finite coordinate"});
    return p;
}

json json_point(const Point2& p) { return json::array({p.x, p.y}); }

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw DomainError({std::string("schema: missing numeric field '") + key + "'"});
    double v = j[key].get<double>();
    if (!std::isfinite(v)) throw DomainError({std::string("schema: non-finite '") + key + "'"});
    return v;
}

Edge edge_from_json(const json& e) {
    if (!e.is_object() || !e.contains("type")) throw DomainError({"schema: edge needs a type"});
    std::string t = e["type"].get<std::string>();
    if (t == "seg") {
        if (!e.contains("a") || !e.contains("b")) throw DomainError({"schema: seg needs a and b"});
        return Edge::segment(point_from_json(e["a"]), point_from_json(e["b"]));
    }
    if (t == "arc") {
        if (!e.contains("center")) throw DomainError({"schema: arc needs center"});
        Arc2 a;
        a.center = point_from_json(e["center"]);
        a.radius = number(e, "r");
        a.a0 = number(e, "a0");
        a.a1 = number(e, "a1");
        a.ccw = e.value("ccw", true);
        return Edge::circular(a);
    }
    throw DomainError({"schema: unknown edge type '" + t + "'"});
}

json edge_to_json(const Edge& e) {
    if (e.type == Edge::Type::seg)
        return {{"type", "seg"}, {"a", json_point(e.seg.a)}, {"b", json_point(e.seg.b)}};
    return {{"type", "arc"},        {"center", json_point(e.arc.center)}, {"r", e.arc.radius},
            {"a0", e.arc.a0},        {"a1", e.arc.a1},                     {"ccw", e.arc.ccw}};
}

}  // namespace

PlanarDomain domain_from_json(const json& j) {
    if (!j.is_object()) throw DomainError({"schema: document must be an object"});
    PlanarDomain d;
    if (!j.contains("kind") || !j["kind"].is_string()) throw DomainError({"schema: missing kind"});
    std::string kind = j["kind"].get<std::string>();
    if (kind == "bounded")
        d.kind = DomainKind::bounded;
    else if (kind == "complement")
        d.kind = DomainKind::complement;
    else if (kind == "clipped")
        d.kind = DomainKind::clipped;
    else
        throw DomainError({"schema: unknown kind '" + kind + "'"});

    for (const auto& l : j.value("loops", json::array())) {
        Loop loop;
        if (!l.contains("edges") || !l["edges"].is_array()) throw DomainError({"schema: loop needs edges"});
        for (const auto& e : l["edges"]) loop.edges.push_back(edge_from_json(e));
        d.loops.push_back(std::move(loop));
    }
    for (const auto& s : j.value("slits", json::array())) {
        std::vector<Point2> pts;
        for (const auto& p : s) pts.push_back(point_from_json(p));
        d.slits.push_back(std::move(pts));
    }
    for (const auto& l : j.value("lines", json::array())) {
        Line2 line;
        line.p = point_from_json(l.at("p"));
        line.d = point_from_json(l.at("d"));
        for (const auto& g : l.value("gaps", json::array())) {
            if (!g.is_array() || g.size() != 2) throw DomainError({"schema: gap must be [t0, t1]"});
            line.gaps.push_back({g[0].get<double>(), g[1].get<double>()});
        }
        d.lines.push_back(std::move(line));
    }
    for (const auto& h : j.value("halfplanes", json::array())) {
        HalfPlane hp;
        hp.n = point_from_json(h.at("n"));
        hp.c = number(h, "c");
        d.halfplanes.push_back(hp);
    }
    for (const auto& p : j.value("singular_vertices", json::array())) d.singular_vertices.push_back(point_from_json(p));
    if (j.contains("tolerance")) {
        const auto& t = j["tolerance"];
        d.tol.eps_geom = t.value("eps_geom", d.tol.eps_geom);
        d.tol.eps_flat = t.value("eps_flat", d.tol.eps_flat);
        d.tol.eps_metric = t.value("eps_metric", d.tol.eps_metric);
    }
    validate_domain(d);
    return d;
}

PlanarDomain load_domain(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::exception& e) {
        throw DomainError({std::string("schema: ") + e.what()});
    }
    try {
        return domain_from_json(j);
    } catch (const json::exception& e) {
        throw DomainError({std::string("schema: ") + e.what()});
    }
}

json domain_to_json(const PlanarDomain& d) {
    json j;
    j["kind"] = to_string(d.kind);
    json loops = json::array();
    for (const auto& l : d.loops) {
        json edges = json::array();
        for (const auto& e : l.edges) edges.push_back(edge_to_json(e));
        loops.push_back({{"edges", edges}});
    }
    j["loops"] = loops;
    if (!d.slits.empty()) {
        json slits = json::array();
        for (const auto& s : d.slits) {
            json pts = json::array();
            for (const auto& p : s) pts.push_back(json_point(p));
            slits.push_back(pts);
        }
        j["slits"] = slits;
    }
    if (!d.lines.empty()) {
        json lines = json::array();
        for (const auto& l : d.lines) {
            json gaps = json::array();
            for (const auto& g : l.gaps) gaps.push_back({g[0], g[1]});
            lines.push_back({{"p", json_point(l.p)}, {"d", json_point(l.d)}, {"gaps", gaps}});
        }
        j["lines"] = lines;
    }
    if (!d.halfplanes.empty()) {
        json hps = json::array();
        for (const auto& h : d.halfplanes) hps.push_back({{"n", json_point(h.n)}, {"c", h.c}});
        j["halfplanes"] = hps;
    }
    if (!d.singular_vertices.empty()) {
        json sv = json::array();
        for (const auto& p : d.singular_vertices) sv.push_back(json_point(p));
        j["singular_vertices"] = sv;
    }
    j["tolerance"] = {{"eps_geom", d.tol.eps_geom}, {"eps_flat", d.tol.eps_flat}, {"eps_metric", d.tol.eps_metric}};
    return j;
}

std::string serialize_domain(const PlanarDomain& d) { return domain_to_json(d).dump(2); }

double loop_signed_area(const Loop& loop, double eps_flat) {
    auto ring = loop.flatten(eps_flat);
    return polygon_signed_area(ring);
}

bool point_in_ring(const Point2& p, std::span<const Point2> ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = ring[i];
        const Point2& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

double ring_distance(const Point2& p, std::span<const Point2> ring) {
    double m = std::numeric_limits<double>::infinity();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, point_segment_distance(p, ring[i], ring[(i + 1) % n]));
    return m;
}

std::vector<Point2> clip_convex(const std::vector<Point2>& poly, const HalfPlane& h) {
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    if (n == 0) return out;
    auto val = [&](const Point2& p) { return dot(h.n, p) - h.c; };
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        double va = val(a), vb = val(b);
        if (va <= 0) out.push_back(a);
        if ((va < 0 && vb > 0) || (va > 0 && vb < 0)) {
            double t = va / (va - vb);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

std::vector<Point2> clipped_region_polygon(const PlanarDomain& d, double R) {
    std::vector<Point2> poly{{-R, -R}, {R, -R}, {R, R}, {-R, R}};
    for (const auto& h : d.halfplanes) poly = clip_convex(poly, h);
    return poly;
}

PlanarDomain make_polygon_domain(const std::vector<Point2>& ccw_vertices) {
    PlanarDomain d;
    d.kind = DomainKind::bounded;
    Loop loop;
    for (std::size_t i = 0; i < ccw_vertices.size(); ++i)
        loop.edges.push_back(Edge::segment(ccw_vertices[i], ccw_vertices[(i + 1) % ccw_vertices.size()]));
    d.loops.push_back(std::move(loop));
    return d;
}

namespace {

struct FlatSeg {
    Point2 a, b;
    int comp;       // component id
    int idx;        // index within component
    int comp_size;  // segment count of the component
    bool closed;
};

bool adjacent(const FlatSeg& s, const FlatSeg& t) {
    if (s.comp != t.comp) return false;
    int d = std::abs(s.idx - t.idx);
    if (d == 1) return true;
    return s.closed && d == s.comp_size - 1;
}

// Pairwise intersection test over flattened boundary pieces, pruned by an x-sweep.
void check_intersections(std::vector<FlatSeg> segs, double eps, const std::vector<std::string>& comp_names,
                         std::vector<std::string>& problems) {
    std::sort(segs.begin(), segs.end(), [](const FlatSeg& s, const FlatSeg& t) {
        return std::min(s.a.x, s.b.x) < std::min(t.a.x, t.b.x);
    });
    int reported = 0;
    for (std::size_t i = 0; i < segs.size() && reported < 8; ++i) {
        const auto& s = segs[i];
        double maxx = std::max(s.a.x, s.b.x) + eps;
        double miny = std::min(s.a.y, s.b.y) - eps, maxy = std::max(s.a.y, s.b.y) + eps;
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const auto& t = segs[j];
            if (std::min(t.a.x, t.b.x) > maxx) break;
            if (std::max(t.a.y, t.b.y) < miny || std::min(t.a.y, t.b.y) > maxy) continue;
            if (adjacent(s, t) || (s.comp == t.comp && s.idx == t.idx)) continue;
            if (!segments_intersect(s.a, s.b, t.a, t.b, eps)) continue;
            std::ostringstream os;
            if (s.comp == t.comp)
                os << "self-intersecting " << comp_names[s.comp];
            else
                os << "intersecting boundary pieces " << comp_names[s.comp] << " and " << comp_names[t.comp];
            os << " near (" << s.a.x << ", " << s.a.y << ")";
            problems.push_back(os.str());
            ++reported;
            break;
        }
    }
}

}  // namespace

void validate_domain(const PlanarDomain& d) {
    std::vector<std::string> problems;
    try {
        d.tol.validate();
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    const double eps = d.tol.eps_geom;
    const double eps_join = std::max(d.tol.eps_flat, 1e-9);

    if (d.kind == DomainKind::bounded && d.loops.empty()) problems.push_back("bounded domain needs an outer loop");
    if (d.kind != DomainKind::complement && !d.slits.empty()) problems.push_back("slits allowed only in complement kind");
    if (d.kind != DomainKind::complement && !d.lines.empty()) problems.push_back("lines allowed only in complement kind");
    if (d.kind != DomainKind::clipped && !d.halfplanes.empty()) problems.push_back("halfplanes allowed only in clipped kind");
    if (d.kind == DomainKind::clipped && d.halfplanes.empty()) problems.push_back("clipped domain needs a halfplane");

    std::vector<std::vector<Point2>> rings;
    for (std::size_t li = 0; li < d.loops.size(); ++li) {
        const auto& loop = d.loops[li];
        if (loop.edges.empty()) {
            problems.push_back("loop " + std::to_string(li) + " is empty");
            rings.emplace_back();
            continue;
        }
        for (std::size_t ei = 0; ei < loop.edges.size(); ++ei) {
            const auto& e = loop.edges[ei];
            if (e.type == Edge::Type::arc && !(e.arc.radius > eps))
                problems.push_back("arc radius not positive in loop " + std::to_string(li));
            if (e.type == Edge::Type::seg && !(e.seg.length() > eps))
                problems.push_back("degenerate segment in loop " + std::to_string(li));
            const auto& nx = loop.edges[(ei + 1) % loop.edges.size()];
            if (distance(e.end(), nx.start()) > eps_join)
                problems.push_back("loop " + std::to_string(li) + " is not closed at edge " + std::to_string(ei));
        }
        rings.push_back(loop.flatten(d.tol.eps_flat));
    }
    if (!problems.empty()) throw DomainError(problems);

    if (d.kind == DomainKind::bounded) {
        if (polygon_signed_area(rings[0]) <= 0) problems.push_back("outer orientation: loop 0 must be counter-clockwise");
        for (std::size_t i = 1; i < rings.size(); ++i) {
            if (polygon_signed_area(rings[i]) >= 0) problems.push_back("hole orientation: loop " + std::to_string(i) + " must be clockwise");
            if (!point_in_ring(rings[i][0], rings[0])) problems.push_back("hole outside outer loop: loop " + std::to_string(i));
        }
    }
    // Nested obstacle/hole loops disconnect or duplicate regions.
    std::size_t first_obstacle = d.kind == DomainKind::bounded ? 1 : 0;
    for (std::size_t i = first_obstacle; i < rings.size(); ++i)
        for (std::size_t k = first_obstacle; k < rings.size(); ++k)
            if (i != k && point_in_ring(rings[i][0], rings[k]))
                problems.push_back("nested loops " + std::to_string(i) + " inside " + std::to_string(k));

    std::vector<FlatSeg> segs;
    std::vector<std::string> names;
    int comp = 0;
    for (std::size_t li = 0; li < rings.size(); ++li, ++comp) {
        names.push_back("loop " + std::to_string(li));
        const auto& r = rings[li];
        int n = static_cast<int>(r.size());
        for (int i = 0; i < n; ++i) segs.push_back({r[i], r[(i + 1) % n], comp, i, n, true});
    }
    for (std::size_t si = 0; si < d.slits.size(); ++si, ++comp) {
        names.push_back("slit " + std::to_string(si));
        const auto& s = d.slits[si];
        if (s.empty()) {
            problems.push_back("slit " + std::to_string(si) + " is empty");
            continue;
        }
        int n = static_cast<int>(s.size());
        if (n == 1) segs.push_back({s[0], s[0], comp, 0, 1, false});
        for (int i = 0; i + 1 < n; ++i) segs.push_back({s[i], s[i + 1], comp, i, n - 1, false});
    }
    check_intersections(std::move(segs), eps, names, problems);

    if (!d.lines.empty()) {
        for (std::size_t i = 0; i < d.lines.size(); ++i) {
            const auto& l = d.lines[i];
            if (!(norm(l.d) > eps)) problems.push_back("line " + std::to_string(i) + " has zero direction");
            if (l.gaps.empty()) problems.push_back("disconnected interior: line " + std::to_string(i) + " has no gap");
            for (std::size_t k = i + 1; k < d.lines.size(); ++k)
                if (std::abs(cross(l.unit(), d.lines[k].unit())) > eps)
                    problems.push_back("disconnected interior: lines " + std::to_string(i) + " and " + std::to_string(k) + " cross");
        }
    }
    if (d.kind == DomainKind::clipped) {
        for (const auto& h : d.halfplanes)
            if (!(norm(h.n) > 0)) problems.push_back("halfplane with zero normal");
        double R = 10.0 * (d.max_coordinate() + 1.0);
        auto poly = clipped_region_polygon(d, R);
        if (poly.size() < 3 || std::abs(polygon_signed_area(poly)) <= eps) problems.push_back("clipped region is empty");
        else
            for (std::size_t i = 0; i < rings.size(); ++i)
                if (!point_in_ring(rings[i][0], poly)) problems.push_back("hole outside clipped region: loop " + std::to_string(i));
    }
    if (!problems.empty()) throw DomainError(problems);
}

namespace {

// Boundary edges of the clipped-kind region (box edges excluded), in CCW order.
struct ActiveChains {
    int active_halfplanes = 0;
    int chains = 0;
    bool bounded = false;
};

ActiveChains clipped_boundary(const PlanarDomain& d) {
    ActiveChains res;
    double R = 1e3 * (d.max_coordinate() + 1.0);
    auto poly = clipped_region_polygon(d, R);
    const std::size_t n = poly.size();
    if (n < 3) return res;
    double tol = 1e-9 * R;
    std::vector<int> on_line(n, -1);
    std::vector<bool> used(d.halfplanes.size(), false);
    bool touches_box = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        for (std::size_t h = 0; h < d.halfplanes.size(); ++h) {
            const auto& hp = d.halfplanes[h];
            double nn = norm(hp.n);
            if (std::abs(dot(hp.n, a) - hp.c) <= tol * nn && std::abs(dot(hp.n, b) - hp.c) <= tol * nn) {
                on_line[i] = static_cast<int>(h);
                used[h] = true;
                break;
            }
        }
        if (on_line[i] < 0) touches_box = true;
    }
    res.active_halfplanes = static_cast<int>(std::count(used.begin(), used.end(), true));
    res.bounded = !touches_box;
    if (!touches_box) {
        res.chains = 1;
        return res;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (on_line[i] >= 0 && on_line[(i + n - 1) % n] < 0) ++res.chains;
    return res;
}

bool loop_is_convex(const Loop& loop, double eps_geom, double eps_flat) {
    const std::size_t n = loop.edges.size();
    for (const auto& e : loop.edges)
        if (e.type == Edge::Type::arc && !e.arc.ccw) return false;
    bool all_seg = std::all_of(loop.edges.begin(), loop.edges.end(), [](const Edge& e) { return e.type == Edge::Type::seg; });
    if (all_seg) {
        std::vector<Point2> v;
        for (const auto& e : loop.edges) v.push_back(e.seg.a);
        if (polygon_signed_area(v) <= 0) return false;
        for (std::size_t i = 0; i < n; ++i)
            if (orientation(v[(i + n - 1) % n], v[i], v[(i + 1) % n], eps_geom) == Orientation::right) return false;
        // Total turning must be exactly one revolution for a convex simple polygon.
        double turn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Point2 a = v[i] - v[(i + n - 1) % n], b = v[(i + 1) % n] - v[i];
            turn += std::atan2(cross(a, b), dot(a, b));
        }
        return std::abs(turn - 2 * kPi) < 1e-6;
    }
    if (loop_signed_area(loop, eps_flat) <= 0) return false;
    double turn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Edge& e = loop.edges[i];
        const Edge& f = loop.edges[(i + 1) % n];
        Point2 tin = edge_tangent(e, e.length());
        Point2 tout = edge_tangent(f, 0.0);
        double c = cross(tin, tout);
        if (c < -1e-9) return false;
        turn += std::atan2(c, dot(tin, tout));
        if (e.type == Edge::Type::arc) turn += e.arc.sweep();
    }
    return std::abs(turn - 2 * kPi) < 1e-6;
}

}  // namespace

DomainDiagnostics diagnose(const PlanarDomain& d) {
    DomainDiagnostics g;
    g.singular_vertices = d.singular_vertices;
    const double eps = d.tol.eps_geom;

    ActiveChains chains;
    if (d.kind == DomainKind::clipped) chains = clipped_boundary(d);

    switch (d.kind) {
        case DomainKind::bounded: g.is_bounded = true; break;
        case DomainKind::complement: g.is_bounded = false; break;
        case DomainKind::clipped: g.is_bounded = chains.bounded; break;
    }

    bool has_arc = false;
    for (const auto& l : d.loops)
        for (const auto& e : l.edges) has_arc = has_arc || e.type == Edge::Type::arc;

    if (d.kind == DomainKind::bounded) {
        g.is_convex = d.loops.size() == 1 && loop_is_convex(d.loops[0], eps, d.tol.eps_flat);
        bool long_seg = false;
        for (const auto& e : d.loops[0].edges) long_seg = long_seg || (e.type == Edge::Type::seg && e.seg.length() > eps);
        g.is_strictly_convex_flag = g.is_convex && !long_seg;
    } else if (d.kind == DomainKind::clipped) {
        g.is_convex = d.loops.empty();
        g.is_strictly_convex_flag = false;
        g.is_halfplane = d.loops.empty() && chains.active_halfplanes == 1;
    } else {
        bool empty = d.loops.empty() && d.slits.empty() && d.lines.empty();
        g.is_convex = empty;
    }

    // Boundary components.
    int comps = static_cast<int>(d.loops.size() + d.slits.size());
    for (const auto& l : d.lines) comps += static_cast<int>(l.gaps.size()) + 1;
    if (d.kind == DomainKind::clipped) comps += chains.chains;
    g.boundary_components = comps;

    // Collinearity of the whole boundary.
    std::vector<Point2> pts;
    for (const auto& l : d.loops)
        for (const auto& e : l.edges) pts.push_back(e.start());
    for (const auto& s : d.slits) pts.insert(pts.end(), s.begin(), s.end());
    std::vector<std::pair<Point2, Point2>> lines;
    for (const auto& l : d.lines) lines.push_back({l.p, l.unit()});
    if (d.kind == DomainKind::clipped) {
        double R = 1e3 * (d.max_coordinate() + 1.0);
        auto poly = clipped_region_polygon(d, R);
        for (const auto& h : d.halfplanes) {
            double nn = norm(h.n);
            bool active = false;
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const Point2& a = poly[i];
                const Point2& b = poly[(i + 1) % poly.size()];
                if (std::abs(dot(h.n, a) - h.c) <= 1e-9 * R * nn && std::abs(dot(h.n, b) - h.c) <= 1e-9 * R * nn) active = true;
            }
            if (active) lines.push_back({h.n * (h.c / (nn * nn)), Point2{-h.n.y, h.n.x} / nn});
        }
    }
    if (has_arc) {
        g.boundary_collinear = false;
    } else {
        Point2 o, dir;
        bool have_dir = false;
        if (!lines.empty()) {
            o = lines[0].first;
            dir = lines[0].second;
            have_dir = true;
        } else if (!pts.empty()) {
            o = pts[0];
            double best = 0.0;
            for (const auto& p : pts)
                if (distance(p, o) > best) {
                    best = distance(p, o);
                    dir = (p - o) / best;
                }
            have_dir = best > eps;
        }
        bool col = true;
        if (have_dir) {
            for (const auto& p : pts) col = col && std::abs(cross(dir, p - o)) <= eps;
            for (const auto& [lp, ld] : lines)
                col = col && std::abs(cross(dir, ld)) <= eps && std::abs(cross(dir, lp - o)) <= eps;
        }
        g.boundary_collinear = col;
        g.boundary_single_point = col && !have_dir && lines.empty() && !pts.empty();
    }
    return g;
}

double boundary_distance(const PlanarDomain& d, const Point2& p) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& l : d.loops)
        for (const auto& e : l.edges)
            m = std::min(m, e.type == Edge::Type::seg ? point_segment_distance(p, e.seg.a, e.seg.b) : e.arc.distance_to(p));
    for (const auto& s : d.slits) {
        if (s.size() == 1) m = std::min(m, distance(p, s[0]));
        for (std::size_t i = 0; i + 1 < s.size(); ++i) m = std::min(m, point_segment_distance(p, s[i], s[i + 1]));
    }
    for (const auto& l : d.lines) {
        double t = dot(p - l.p, l.d) / dot(l.d, l.d);
        double best = std::abs(cross(l.unit(), p - l.p));
        for (const auto& g : l.gaps)
            if (t > g[0] && t < g[1]) best = std::min(distance(p, l.p + l.d * g[0]), distance(p, l.p + l.d * g[1]));
        m = std::min(m, best);
    }
    if (!d.halfplanes.empty()) {
        double R = 1e3 * (d.max_coordinate() + std::max(std::abs(p.x), std::abs(p.y)) + 1.0);
        auto poly = clipped_region_polygon(d, R);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2& a = poly[i];
            const Point2& b = poly[(i + 1) % poly.size()];
            bool on_hp = false;
            for (const auto& h : d.halfplanes) {
                double nn = norm(h.n);
                if (std::abs(dot(h.n, a) - h.c) <= 1e-9 * R * nn && std::abs(dot(h.n, b) - h.c) <= 1e-9 * R * nn) on_hp = true;
            }
            if (on_hp) m = std::min(m, point_segment_distance(p, a, b));
        }
    }
    return m;
}

double boundary_length(const PlanarDomain& d, const BoundaryRef& ref) {
    switch (ref.kind) {
        case BoundaryRef::Kind::loop:
            if (ref.index < 0 || ref.index >= static_cast<int>(d.loops.size())) break;
            return d.loops[ref.index].length();
        case BoundaryRef::Kind::slit: {
            if (ref.index < 0 || ref.index >= static_cast<int>(d.slits.size())) break;
            const auto& s = d.slits[ref.index];
            double L = 0.0;
            for (std::size_t i = 0; i + 1 < s.size(); ++i) L += distance(s[i], s[i + 1]);
            return 2.0 * L;
        }
        case BoundaryRef::Kind::line:
            if (ref.index < 0 || ref.index >= static_cast<int>(d.lines.size())) break;
            return std::numeric_limits<double>::infinity();
        case BoundaryRef::Kind::halfplane:
            if (ref.index < 0 || ref.index >= static_cast<int>(d.halfplanes.size())) break;
            return std::numeric_limits<double>::infinity();
    }
    throw std::out_of_range("unknown boundary component " + ref.str());
}

BoundaryPoint boundary_point_at(const PlanarDomain& d, const BoundaryRef& ref, double s) {
    BoundaryPoint bp;
    bp.ref = ref;
    double total = boundary_length(d, ref);
    switch (ref.kind) {
        case BoundaryRef::Kind::loop: {
            const Loop& loop = d.loops[ref.index];
            bp.s = wrap_param(s, total);
            bp.xy = loop.at(bp.s);
            Point2 t = loop.tangent(bp.s);
            bool left = d.kind == DomainKind::bounded || loop_signed_area(loop, 1e-3) < 0;
            bp.inward = left ? left_normal(t) : -left_normal(t);
            break;
        }
        case BoundaryRef::Kind::slit: {
            const auto& pts = d.slits[ref.index];
            double L = total / 2.0;
            bp.s = wrap_param(s, total);
            if (pts.size() == 1 || L == 0.0) {
                bp.s = 0.0;
                bp.xy = pts[0];
                bp.inward = {1.0, 0.0};
                break;
            }
            bool back = bp.s >= L;
            double u = back ? total - bp.s : bp.s;
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                double len = distance(pts[i], pts[i + 1]);
                if (u <= acc + len || i + 2 == pts.size()) {
                    double t = len > 0 ? std::clamp((u - acc) / len, 0.0, 1.0) : 0.0;
                    bp.xy = pts[i] + (pts[i + 1] - pts[i]) * t;
                    Point2 tg = (pts[i + 1] - pts[i]) / len;
                    bp.inward = back ? -left_normal(tg) : left_normal(tg);
                    break;
                }
                acc += len;
            }
            break;
        }
        case BoundaryRef::Kind::line: {
            const auto& l = d.lines[ref.index];
            bp.s = s;
            bp.xy = l.p + l.unit() * s;
            bp.inward = left_normal(l.unit());
            break;
        }
        case BoundaryRef::Kind::halfplane: {
            const auto& h = d.halfplanes[ref.index];
            double nn = norm(h.n);
            Point2 foot = h.n * (h.c / (nn * nn));
            Point2 t = Point2{-h.n.y, h.n.x} / nn;
            bp.s = s;
            bp.xy = foot + t * s;
            bp.inward = -h.n / nn;
            break;
        }
    }
    return bp;
}

}  // namespace relmetric
