#include "relmetric/geodesic.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <stdexcept>

#include "relmetric/parallel.hpp"

namespace relmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Point2> dedupe_ring(std::vector<Point2> r, double eps) {
    std::vector<Point2> out;
    for (const auto& p : r)
        if (out.empty() || relmetric::distance(out.back(), p) > eps) out.push_back(p);
    while (out.size() > 1 && relmetric::distance(out.front(), out.back()) <= eps) out.pop_back();
    return out;
}

// Parameter interval of the line p + t u (u unit) inside the square |x|,|y| <= R.
bool clip_line_to_box(const Point2& p, const Point2& u, double R, double& t0, double& t1) {
    t0 = -kInf;
    t1 = kInf;
    const double pc[2] = {p.x, p.y};
    const double uc[2] = {u.x, u.y};
    for (int k = 0; k < 2; ++k) {
        if (std::abs(uc[k]) < 1e-300) {
            if (std::abs(pc[k]) > R) return false;
            continue;
        }
        double a = (-R - pc[k]) / uc[k], b = (R - pc[k]) / uc[k];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
    }
    return t0 < t1;
}

}  // namespace

GeodesicPath GeodesicPath::unreachable(const Point2& p, const Point2& q) {
    GeodesicPath g;
    g.from = p;
    g.to = q;
    g.reachable = false;
    g.length = kInf;
    return g;
}

FreeSpace::FreeSpace(const PlanarDomain& d, double R, double eps_flat) : eps_(d.tol.eps_geom) {
    switch (d.kind) {
        case DomainKind::bounded:
            has_outer_ = true;
            for (const auto& l : d.loops) rings_.push_back(dedupe_ring(l.flatten(eps_flat), eps_));
            for (const auto& s : d.slits) slits_.push_back(s);
            break;
        case DomainKind::clipped:
            has_outer_ = true;
            rings_.push_back(dedupe_ring(clipped_region_polygon(d, R), eps_));
            for (const auto& l : d.loops) rings_.push_back(dedupe_ring(l.flatten(eps_flat), eps_));
            break;
        case DomainKind::complement:
            has_outer_ = true;
            rings_.push_back({{-R, -R}, {R, -R}, {R, R}, {-R, R}});
            for (const auto& l : d.loops) rings_.push_back(dedupe_ring(l.flatten(eps_flat), eps_));
            for (const auto& s : d.slits) slits_.push_back(s);
            for (const auto& l : d.lines) {
                Point2 u = l.unit();
                double scale = norm(l.d);
                double t0, t1;
                if (!clip_line_to_box(l.p, u, R, t0, t1)) continue;
                std::vector<std::array<double, 2>> gaps;
                for (const auto& g : l.gaps) gaps.push_back({g[0] * scale, g[1] * scale});
                std::sort(gaps.begin(), gaps.end());
                double cur = t0;
                for (const auto& g : gaps) {
                    if (g[0] > cur) slits_.push_back({l.p + u * cur, l.p + u * std::min(g[0], t1)});
                    cur = std::max(cur, g[1]);
                    if (cur >= t1) break;
                }
                if (cur < t1) slits_.push_back({l.p + u * cur, l.p + u * t1});
            }
            break;
    }
    for (std::size_t r = 0; r < rings_.size(); ++r) {
        const auto& ring = rings_[r];
        for (std::size_t i = 0; i < ring.size(); ++i)
            edges_.push_back({ring[i], ring[(i + 1) % ring.size()], static_cast<int>(r), static_cast<int>(i)});
    }
    for (std::size_t s = 0; s < slits_.size(); ++s) {
        const auto& sl = slits_[s];
        if (sl.size() == 1) edges_.push_back({sl[0], sl[0], -static_cast<int>(s) - 1, 0});
        for (std::size_t i = 0; i + 1 < sl.size(); ++i)
            edges_.push_back({sl[i], sl[i + 1], -static_cast<int>(s) - 1, static_cast<int>(i)});
    }
    build_grid();
}

void FreeSpace::build_grid() {
    double x0 = kInf, y0 = kInf, x1 = -kInf, y1 = -kInf;
    for (const auto& e : edges_) {
        x0 = std::min({x0, e.a.x, e.b.x});
        x1 = std::max({x1, e.a.x, e.b.x});
        y0 = std::min({y0, e.a.y, e.b.y});
        y1 = std::max({y1, e.a.y, e.b.y});
    }
    if (edges_.empty()) {
        x0 = y0 = 0;
        x1 = y1 = 1;
    }
    double w = std::max(x1 - x0, 1e-9), h = std::max(y1 - y0, 1e-9);
    double cells = std::max<double>(1.0, static_cast<double>(edges_.size()));
    cell_ = std::sqrt(w * h / cells);
    cell_ = std::max({cell_, w / 512.0, h / 512.0});
    nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
    gx0_ = x0;
    gy0_ = y0;
    grid_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    const double margin = eps_ + 1e-9 * std::max(w, h);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        int cx0 = std::clamp(static_cast<int>(std::floor((std::min(e.a.x, e.b.x) - margin - gx0_) / cell_)), 0, nx_ - 1);
        int cx1 = std::clamp(static_cast<int>(std::floor((std::max(e.a.x, e.b.x) + margin - gx0_) / cell_)), 0, nx_ - 1);
        int cy0 = std::clamp(static_cast<int>(std::floor((std::min(e.a.y, e.b.y) - margin - gy0_) / cell_)), 0, ny_ - 1);
        int cy1 = std::clamp(static_cast<int>(std::floor((std::max(e.a.y, e.b.y) + margin - gy0_) / cell_)), 0, ny_ - 1);
        for (int cx = cx0; cx <= cx1; ++cx)
            for (int cy = cy0; cy <= cy1; ++cy) grid_[static_cast<std::size_t>(cx) * ny_ + cy].push_back(static_cast<int>(i));
    }
}

void FreeSpace::candidates(const Point2& u, const Point2& v, std::vector<int>& out) const {
    out.clear();
    const double margin = eps_ + 1e-9 * cell_ * std::max(nx_, ny_);
    double xmin = std::min(u.x, v.x) - margin, xmax = std::max(u.x, v.x) + margin;
    int cx0 = std::clamp(static_cast<int>(std::floor((xmin - gx0_) / cell_)), 0, nx_ - 1);
    int cx1 = std::clamp(static_cast<int>(std::floor((xmax - gx0_) / cell_)), 0, nx_ - 1);
    auto y_at = [&](double x) {
        if (v.x == u.x) return u.y;
        double t = std::clamp((x - u.x) / (v.x - u.x), 0.0, 1.0);
        return u.y + (v.y - u.y) * t;
    };
    for (int cx = cx0; cx <= cx1; ++cx) {
        double xa = std::max(xmin, gx0_ + cx * cell_), xb = std::min(xmax, gx0_ + (cx + 1) * cell_);
        double ya = y_at(xa), yb = y_at(xb);
        if (v.x == u.x) {
            ya = u.y;
            yb = v.y;
        }
        double lo = std::min(ya, yb) - margin, hi = std::max(ya, yb) + margin;
        int cy0 = std::clamp(static_cast<int>(std::floor((lo - gy0_) / cell_)), 0, ny_ - 1);
        int cy1 = std::clamp(static_cast<int>(std::floor((hi - gy0_) / cell_)), 0, ny_ - 1);
        for (int cy = cy0; cy <= cy1; ++cy) {
            const auto& cell = grid_[static_cast<std::size_t>(cx) * ny_ + cy];
            out.insert(out.end(), cell.begin(), cell.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

bool FreeSpace::in_closure(const Point2& p) const {
    // Crossing parity per ring along the ray to +x, read off the grid row of p.
    std::vector<char> parity(rings_.size(), 0);
    int cy = static_cast<int>(std::floor((p.y - gy0_) / cell_));
    if (cy >= 0 && cy < ny_) {
        int cx0 = std::clamp(static_cast<int>(std::floor((p.x - gx0_) / cell_)), 0, nx_ - 1);
        std::vector<int> row;
        for (int cx = cx0; cx < nx_; ++cx) {
            const auto& cell = grid_[static_cast<std::size_t>(cx) * ny_ + cy];
            row.insert(row.end(), cell.begin(), cell.end());
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        for (int id : row) {
            const auto& e = edges_[id];
            if (e.owner < 0 || (e.a.y > p.y) == (e.b.y > p.y)) continue;
            double x = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
            if (x > p.x) parity[e.owner] ^= 1;
        }
    }
    std::vector<int> near;
    bool near_done = false;
    for (std::size_t r = 0; r < rings_.size(); ++r) {
        bool outer = has_outer_ && r == 0;
        if ((parity[r] != 0) == outer) continue;
        if (!near_done) {
            candidates(p, p, near);
            near_done = true;
        }
        bool close = false;
        for (int id : near) {
            const auto& e = edges_[id];
            if (e.owner == static_cast<int>(r) && point_segment_distance(p, e.a, e.b) <= eps_) {
                close = true;
                break;
            }
        }
        if (!close) return false;
    }
    return true;
}

double FreeSpace::distance_to_boundary(const Point2& p) const {
    double m = kInf;
    for (const auto& e : edges_) m = std::min(m, point_segment_distance(p, e.a, e.b));
    return m;
}

Point2 FreeSpace::nearest_boundary_point(const Point2& p) const {
    double m = kInf;
    Point2 best = p;
    for (const auto& e : edges_) {
        double t = std::clamp(project_param(p, e.a, e.b), 0.0, 1.0);
        Point2 c = e.a + (e.b - e.a) * t;
        double dd = relmetric::distance(p, c);
        if (dd < m) {
            m = dd;
            best = c;
        }
    }
    return best;
}

bool FreeSpace::slit_run_crosses(const Point2& u, const Point2& v, int slit, int vertex) const {
    const auto& pts = slits_[slit];
    const int n = static_cast<int>(pts.size());
    if (vertex <= 0 || vertex >= n - 1) return false;
    double L = relmetric::distance(u, v);
    auto on_open_segment = [&](const Point2& w) {
        if (point_segment_distance(w, u, v) > eps_) return false;
        double t = project_param(w, u, v);
        return t * L > eps_ && (1.0 - t) * L > eps_;
    };
    auto on_segment = [&](const Point2& w) { return point_segment_distance(w, u, v) <= eps_; };
    int j = vertex, k = vertex;
    while (j > 0 && on_segment(pts[j - 1])) --j;
    while (k < n - 1 && on_segment(pts[k + 1])) ++k;
    for (int i = j; i <= k; ++i)
        if (!on_open_segment(pts[i])) return false;
    if (j == 0 || k == n - 1) return false;
    auto oa = orientation(u, v, pts[j - 1], eps_);
    auto ob = orientation(u, v, pts[k + 1], eps_);
    return oa != Orientation::collinear && ob != Orientation::collinear && oa != ob;
}

bool FreeSpace::segment_admissible(const Point2& u, const Point2& v) const {
    double L = relmetric::distance(u, v);
    if (L <= eps_) return in_closure(u);
    std::vector<int> cand;
    candidates(u, v, cand);
    std::vector<double> ts{0.0, 1.0};
    for (int id : cand) {
        const auto& e = edges_[id];
        if (segments_cross_properly(u, v, e.a, e.b, eps_)) return false;
        const Point2* ends[2] = {&e.a, &e.b};
        for (int k = 0; k < 2; ++k) {
            const Point2& w = *ends[k];
            if (point_segment_distance(w, u, v) > eps_) continue;
            double t = project_param(w, u, v);
            if (t * L <= eps_ || (1.0 - t) * L <= eps_) continue;
            ts.push_back(t);
            if (e.owner < 0 && slit_run_crosses(u, v, -e.owner - 1, e.index + k)) return false;
        }
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if ((ts[i + 1] - ts[i]) * L <= eps_) continue;
        Point2 mid = u + (v - u) * (0.5 * (ts[i] + ts[i + 1]));
        if (!in_closure(mid)) return false;
    }
    return true;
}

std::vector<double> FreeSpace::touch_params(const Point2& u, const Point2& v) const {
    std::vector<double> ts;
    double L = relmetric::distance(u, v);
    if (L <= eps_) return ts;
    std::vector<int> cand;
    candidates(u, v, cand);
    for (int id : cand) {
        const auto& e = edges_[id];
        for (const Point2* w : {&e.a, &e.b}) {
            if (point_segment_distance(*w, u, v) > eps_) continue;
            double t = project_param(*w, u, v);
            if (t * L > eps_ && (1.0 - t) * L > eps_) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [&](double a, double b) { return (b - a) * L <= eps_; }), ts.end());
    return ts;
}

bool GeodesicEngine::Sector::contains(const Point2& d) const {
    if (full) return true;
    if (d.x == 0.0 && d.y == 0.0) return true;
    constexpr double tol = 1e-10;
    auto ang = [](const Point2& a, const Point2& b) {
        double t = std::atan2(cross(a, b), dot(a, b));
        return t < 0 ? t + 2 * kPi : t;
    };
    double span = ang(from, to);
    if (span == 0.0) span = 2 * kPi;
    double a = ang(from, d);
    return a <= span + tol || a >= 2 * kPi - tol;
}

double GeodesicEngine::box_for(const PlanarDomain& d, const std::vector<Point2>& pts) {
    double m = d.max_coordinate();
    for (const auto& p : pts) m = std::max({m, std::abs(p.x), std::abs(p.y)});
    return 4.0 * m + 1.0;
}

GeodesicEngine::GeodesicEngine(const PlanarDomain& d, EngineOptions opts)
    : domain_(&d),
      box_(opts.box_half_width > 0 ? opts.box_half_width : box_for(d, {})),
      space_(d, box_, opts.eps_flat > 0 ? opts.eps_flat : d.tol.eps_flat) {
    for (const auto& ring : space_.rings())
        for (const auto& p : ring) nodes_.push_back({p, Sector{}});
    for (const auto& sl : space_.slits()) {
        const std::size_t n = sl.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0 || i + 1 == n) {
                nodes_.push_back({sl[i], Sector{}});
                continue;
            }
            Point2 toprev = sl[i - 1] - sl[i], tonext = sl[i + 1] - sl[i];
            nodes_.push_back({sl[i], Sector{false, tonext, toprev}});
            nodes_.push_back({sl[i], Sector{false, toprev, tonext}});
        }
    }
    const std::size_t n = nodes_.size();
    std::vector<std::vector<std::pair<int, double>>> fwd(n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Node& a = nodes_[i];
            const Node& b = nodes_[j];
            Point2 dvec = b.p - a.p;
            if (norm(dvec) <= space_.eps()) continue;
            if (!a.sector.contains(dvec) || !b.sector.contains(-dvec)) continue;
            if (space_.segment_admissible(a.p, b.p)) fwd[i].push_back({static_cast<int>(j), norm(dvec)});
        }
    });
    adj_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, w] : fwd[i]) {
            adj_[i].push_back({j, w});
            adj_[j].push_back({static_cast<int>(i), w});
        }
}

Point2 GeodesicEngine::snap(const Point2& p) const {
    if (space_.in_closure(p)) return p;
    Point2 nb = space_.nearest_boundary_point(p);
    double eps_flat = domain_->tol.eps_flat;
    if (relmetric::distance(nb, p) <= 2.0 * eps_flat + space_.eps()) return nb;
    throw std::domain_error("point outside closure");
}

GeodesicEngine::Sector GeodesicEngine::query_sector(const QueryPoint& q) const {
    if (!q.inward) return Sector{};
    const Point2 n = *q.inward;
    const double eps = space_.eps();
    for (const auto& sl : space_.slits()) {
        for (std::size_t i = 0; i < sl.size(); ++i) {
            if (relmetric::distance(sl[i], q.xy) > eps) continue;
            if (i == 0 || i + 1 == sl.size()) return Sector{};
            Point2 toprev = sl[i - 1] - q.xy, tonext = sl[i + 1] - q.xy;
            Sector a{false, tonext, toprev}, b{false, toprev, tonext};
            return a.contains(n) ? a : b;
        }
        for (std::size_t i = 0; i + 1 < sl.size(); ++i)
            if (point_segment_distance(q.xy, sl[i], sl[i + 1]) <= eps)
                return Sector{false, Point2{n.y, -n.x}, Point2{-n.y, n.x}};
    }
    return Sector{};
}

QueryPoint GeodesicEngine::query_for(const BoundaryPoint& bp) const {
    QueryPoint q{bp.xy, std::nullopt};
    if (bp.ref.kind == BoundaryRef::Kind::slit) q.inward = bp.inward;
    return q;
}

void GeodesicEngine::classify_pieces(GeodesicPath& path) const {
    // Split at boundary vertices touched by a segment so pieces are maximal runs.
    std::vector<Point2> split;
    for (std::size_t i = 0; i < path.vertices.size(); ++i) {
        split.push_back(path.vertices[i]);
        if (i + 1 == path.vertices.size()) break;
        const Point2& u = path.vertices[i];
        const Point2& v = path.vertices[i + 1];
        for (double t : space_.touch_params(u, v)) split.push_back(u + (v - u) * t);
    }
    path.vertices = std::move(split);
    path.pieces.clear();
    path.length = 0.0;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        Segment2 s{path.vertices[i], path.vertices[i + 1]};
        bool on_boundary = true;
        for (double t : {0.25, 0.5, 0.75})
            on_boundary = on_boundary && space_.distance_to_boundary(s.at(t)) <= 1e-9;
        path.pieces.push_back({s, on_boundary ? PieceLocation::boundary : PieceLocation::interior});
        path.length += s.length();
    }
}

GeodesicPath GeodesicEngine::shortest_path(const QueryPoint& P, const QueryPoint& Q) const {
    QueryPoint p{snap(P.xy), P.inward};
    QueryPoint q{snap(Q.xy), Q.inward};
    Sector sp = query_sector(p), sq = query_sector(q);
    const double eps = space_.eps();

    GeodesicPath path;
    path.from = p.xy;
    path.to = q.xy;

    bool opposite_sides = p.inward && q.inward && !sp.full && !sq.full && dot(*p.inward, *q.inward) < 0;
    if (relmetric::distance(p.xy, q.xy) <= eps && !opposite_sides) {
        path.vertices = {p.xy};
        path.length = 0.0;
        return path;
    }
    Point2 pq = q.xy - p.xy;
    if (relmetric::distance(p.xy, q.xy) > eps && sp.contains(pq) && sq.contains(-pq) && space_.segment_admissible(p.xy, q.xy)) {
        path.vertices = {p.xy, q.xy};
        classify_pieces(path);
        return path;
    }

    // A* over nodes with Euclidean distance to q as heuristic. Links from p and to q pass the
    // cheap sector tests when pushed and the visibility test only when popped.
    const std::size_t n = nodes_.size();
    enum : char { settled_edge, from_p, to_q };
    struct Item {
        double f, g;
        int v, from;
        char kind;
        bool operator>(const Item& o) const { return f > o.f || (f == o.f && v > o.v); }
    };
    auto h = [&](int v) { return v == static_cast<int>(n) ? 0.0 : relmetric::distance(nodes_[v].p, q.xy); };
    std::vector<double> dist(n + 1, kInf);
    std::vector<int> prev(n + 1, -2);
    std::vector<char> closed(n, 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t i = 0; i < n; ++i) {
        const Node& node = nodes_[i];
        Point2 dvec = node.p - p.xy;
        double len = norm(dvec);
        if (len <= eps) {
            if (!p.inward || node.sector.full || node.sector.contains(*p.inward))
                heap.push({h(static_cast<int>(i)), 0.0, static_cast<int>(i), -1, settled_edge});
        } else if (sp.contains(dvec) && node.sector.contains(-dvec)) {
            heap.push({len + h(static_cast<int>(i)), len, static_cast<int>(i), -1, from_p});
        }
    }
    while (!heap.empty()) {
        Item it = heap.top();
        heap.pop();
        if (it.v == static_cast<int>(n)) {
            if (it.kind == to_q && !space_.segment_admissible(nodes_[it.from].p, q.xy)) continue;
            dist[n] = it.g;
            prev[n] = it.from;
            break;
        }
        int u = it.v;
        if (closed[u]) continue;
        if (it.kind == from_p && !space_.segment_admissible(p.xy, nodes_[u].p)) continue;
        closed[u] = 1;
        dist[u] = it.g;
        prev[u] = it.from;
        Point2 dvec = nodes_[u].p - q.xy;
        double len = norm(dvec);
        if (len <= eps) {
            if (!q.inward || nodes_[u].sector.full || nodes_[u].sector.contains(*q.inward))
                heap.push({it.g, it.g, static_cast<int>(n), u, settled_edge});
        } else if (sq.contains(dvec) && nodes_[u].sector.contains(-dvec)) {
            heap.push({it.g + len, it.g + len, static_cast<int>(n), u, to_q});
        }
        for (const auto& [v, w] : adj_[u]) {
            double nd = it.g + w;
            if (!closed[v] && nd < dist[v]) {
                dist[v] = nd;
                heap.push({nd + h(v), nd, v, u, settled_edge});
            }
        }
    }
    if (!(dist[n] < kInf)) return GeodesicPath::unreachable(p.xy, q.xy);

    std::vector<Point2> rev{q.xy};
    for (int cur = prev[n]; cur >= 0; cur = prev[cur]) rev.push_back(nodes_[cur].p);
    rev.push_back(p.xy);
    std::reverse(rev.begin(), rev.end());
    for (const auto& v : rev)
        if (path.vertices.empty() || relmetric::distance(path.vertices.back(), v) > 0.0) path.vertices.push_back(v);
    classify_pieces(path);
    return path;
}

GeodesicPath shortest_path(const PlanarDomain& d, const Point2& p, const Point2& q) {
    double m = std::max({d.max_coordinate(), std::abs(p.x), std::abs(p.y), std::abs(q.x), std::abs(q.y)});
    EngineOptions opts;
    opts.box_half_width = m + relmetric::distance(p, q) + 1.0;
    GeodesicEngine engine(d, opts);
    return engine.shortest_path({p, std::nullopt}, {q, std::nullopt});
}

namespace {

bool has_arcs(const PlanarDomain& d) {
    for (const auto& l : d.loops)
        for (const auto& e : l.edges)
            if (e.type == Edge::Type::arc) return true;
    return false;
}

const Point2* singular_at(const PlanarDomain& d, const Point2& p) {
    for (const auto& v : d.singular_vertices)
        if (relmetric::distance(v, p) <= d.tol.eps_geom) return &v;
    return nullptr;
}

}  // namespace

RelativeDistance relative_boundary_distance(const PlanarDomain& d, const BoundaryPoint& a, const BoundaryPoint& b,
                                            bool certify) {
    RelativeDistance out;
    EngineOptions opts;
    opts.box_half_width = GeodesicEngine::box_for(d, {a.xy, b.xy});
    GeodesicEngine engine(d, opts);

    if (singular_at(d, a.xy) || singular_at(d, b.xy)) {
        // Approach the singular vertex along its boundary component from the forward side.
        bool move_a = singular_at(d, a.xy) != nullptr;
        const BoundaryPoint& fixed = move_a ? b : a;
        const BoundaryPoint& moving = move_a ? a : b;
        for (int k = 4; k <= 20; ++k) {
            double off = std::ldexp(1.0, -k);
            BoundaryPoint m = boundary_point_at(d, moving.ref, moving.s + off);
            GeodesicPath gp = engine.shortest_path(engine.query_for(m), engine.query_for(fixed));
            out.truncation.push_back({off, gp.length});
            out.path = gp;
        }
        out.distance = out.truncation.back().second;
        return out;
    }

    out.path = engine.shortest_path(engine.query_for(a), engine.query_for(b));
    out.distance = out.path.length;
    if (certify) {
        if (has_arcs(d)) {
            EngineOptions fine = opts;
            fine.eps_flat = d.tol.eps_flat / 4.0;
            GeodesicEngine refined(d, fine);
            double r = refined.shortest_path(refined.query_for(a), refined.query_for(b)).length;
            out.refinement_delta = std::abs(r - out.distance);
        } else {
            out.refinement_delta = 0.0;
        }
    }
    return out;
}

namespace {

// Deterministic sample of closure points: half interior (rejection in the boundary box), half on loops.
std::vector<QueryPoint> sample_closure(const PlanarDomain& d, const GeodesicEngine& engine, std::mt19937_64& rng,
                                       int count) {
    std::vector<QueryPoint> pts;
    double m = std::max(d.max_coordinate(), 1e-3);
    double x0 = -m, x1 = m, y0 = -m, y1 = m;
    if (d.kind == DomainKind::bounded) {
        auto ring = d.loops[0].flatten(1e-3);
        x0 = y0 = kInf;
        x1 = y1 = -kInf;
        for (const auto& p : ring) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double total = 0.0;
    for (const auto& l : d.loops) total += l.length();
    while (static_cast<int>(pts.size()) < count) {
        bool boundary = total > 0 && U(rng) < 0.5;
        if (boundary) {
            double s = U(rng) * total;
            int li = 0;
            while (li + 1 < static_cast<int>(d.loops.size()) && s >= d.loops[li].length()) s -= d.loops[li++].length();
            pts.push_back({boundary_point_at(d, {BoundaryRef::Kind::loop, li}, s).xy, std::nullopt});
        } else {
            Point2 p{x0 + (x1 - x0) * U(rng), y0 + (y1 - y0) * U(rng)};
            if (engine.free_space().in_closure(p)) pts.push_back({p, std::nullopt});
        }
    }
    return pts;
}

}  // namespace

MetricReport verify_metric_axioms(const PlanarDomain& d, int sample_count, std::uint64_t seed) {
    MetricReport rep;
    rep.sampled_triples = sample_count;
    double m = std::max(d.max_coordinate(), 1e-3);
    EngineOptions opts;
    opts.box_half_width = 4.0 * m + 1.0;
    GeodesicEngine engine(d, opts);
    std::mt19937_64 rng(seed);
    auto pts = sample_closure(d, engine, rng, 3 * sample_count);
    struct Slot {
        double tri = 0, sym = 0, id = 0;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(sample_count));
    parallel_for(slots.size(), [&](std::size_t t) {
        const auto& a = pts[3 * t];
        const auto& b = pts[3 * t + 1];
        const auto& c = pts[3 * t + 2];
        double ab = engine.distance(a, b), ba = engine.distance(b, a);
        double bc = engine.distance(b, c), ac = engine.distance(a, c);
        double aa = engine.distance(a, a);
        Slot s;
        s.sym = std::abs(ab - ba);
        s.tri = std::max(0.0, ac - ab - bc);
        s.id = std::abs(aa);
        if (ab <= 0.0 && relmetric::distance(a.xy, b.xy) > d.tol.eps_geom) s.id = std::max(s.id, relmetric::distance(a.xy, b.xy));
        slots[t] = s;
    });
    for (const auto& s : slots) {
        rep.max_triangle_violation = std::max(rep.max_triangle_violation, s.tri);
        rep.max_symmetry_violation = std::max(rep.max_symmetry_violation, s.sym);
        rep.max_identity_violation = std::max(rep.max_identity_violation, s.id);
    }
    return rep;
}

bool check_h_structure(const GeodesicPath& path, const PlanarDomain& d) {
    if (!path.reachable) return false;
    const double tol = 1e-9;
    for (std::size_t i = 0; i + 1 < path.pieces.size(); ++i) {
        const auto& a = path.pieces[i];
        const auto& b = path.pieces[i + 1];
        if (a.location != PieceLocation::interior || b.location != PieceLocation::interior) continue;
        Point2 joint = a.seg.b;
        if (boundary_distance(d, joint) <= tol) continue;
        Point2 da = a.seg.b - a.seg.a, db = b.seg.b - b.seg.a;
        bool straight = std::abs(cross(da, db)) <= tol * norm(da) * norm(db) && dot(da, db) > 0;
        if (!straight) return false;
    }
    for (const auto& piece : path.pieces)
        if (piece.seg.length() <= 0.0) return false;
    return true;
}

std::vector<ConditionIReport> check_condition_i(const PlanarDomain& d, const std::vector<Point2>& probes,
                                                int boundary_samples) {
    std::vector<Point2> targets;
    double total = 0.0;
    for (const auto& l : d.loops) total += l.length();
    for (std::size_t li = 0; li < d.loops.size(); ++li) {
        double L = d.loops[li].length();
        int k = std::max(1, static_cast<int>(std::round(boundary_samples * L / total)));
        for (int i = 0; i < k; ++i) targets.push_back(d.loops[li].at(L * i / k));
    }
    std::vector<Point2> all = targets;
    all.insert(all.end(), probes.begin(), probes.end());
    EngineOptions opts;
    opts.box_half_width = GeodesicEngine::box_for(d, all);
    GeodesicEngine engine(d, opts);
    std::vector<ConditionIReport> out(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        ConditionIReport r;
        r.probe = probes[i];
        r.samples = static_cast<int>(targets.size());
        for (const auto& t : targets) {
            double v = engine.distance({probes[i], std::nullopt}, {t, std::nullopt});
            r.sup_distance = std::max(r.sup_distance, v);
        }
        r.finite = std::isfinite(r.sup_distance);
        out[i] = r;
    }
    return out;
}

nlohmann::json path_to_json(const GeodesicPath& p) {
    nlohmann::json j;
    j["reachable"] = p.reachable;
    j["distance"] = p.reachable ? nlohmann::json(p.length) : nlohmann::json(nullptr);
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : p.vertices) verts.push_back(json_point(v));
    j["vertices"] = verts;
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& pc : p.pieces)
        pieces.push_back({{"a", json_point(pc.seg.a)},
                          {"b", json_point(pc.seg.b)},
                          {"location", pc.location == PieceLocation::interior ? "interior" : "boundary"}});
    j["pieces"] = pieces;
    return j;
}

}  // namespace relmetric
