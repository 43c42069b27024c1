#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "relmetric/counterexamples.hpp"
#include "relmetric/parallel.hpp"

namespace relmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double psi_at(int n, int S) { return 2.0 * kPi * n / S; }

// Vertex radius of the polygonal spiral at sample n.
double vertex_radius(const SpiralStrip& s, int n, int S) { return s.rho(psi_at(n, S)); }

struct SectorCoords {
    double alpha, beta;
};

SectorCoords sector_coords(const Point2& p, int i, int S) {
    double t0 = 2.0 * kPi * i / S, t1 = 2.0 * kPi * (i + 1) / S;
    Point2 e0{std::cos(t0), std::sin(t0)}, e1{std::cos(t1), std::sin(t1)};
    double det = cross(e0, e1);
    return {cross(p, e1) / det, cross(e0, p) / det};
}

// Sign function of chord m in sector i; increasing in m.
double chord_h(const SpiralStrip& s, int S, int i, int m, const SectorCoords& q) {
    return q.alpha / vertex_radius(s, i + S * m, S) + q.beta / vertex_radius(s, i + 1 + S * m, S) - 1.0;
}

int chords_outside(const SpiralStrip& s, int S, int i, const SectorCoords& q) {
    int lo = 0, hi = s.coils;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (chord_h(s, S, i, mid, q) < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

bool sector_piece_hits(const SpiralStrip& s, int S, int i, const Point2& p, const Point2& q) {
    SectorCoords a = sector_coords(p, i, S), b = sector_coords(q, i, S);
    int ka = chords_outside(s, S, i, a), kb = chords_outside(s, S, i, b);
    if (ka != kb) return true;
    if (ka < s.coils && (chord_h(s, S, i, ka, a) == 0.0 || chord_h(s, S, i, ka, b) == 0.0)) return true;
    return false;
}

int sector_of(const Point2& p, int S) {
    double a = std::atan2(p.y, p.x);
    if (a < 0) a += 2.0 * kPi;
    int i = static_cast<int>(std::floor(a / (2.0 * kPi / S)));
    return ((i % S) + S) % S;
}

// Plane segment against the polygonal spiral of the strip.
bool plane_segment_hits(const SpiralStrip& s, int S, const Point2& a, const Point2& b) {
    const double r_out = s.rho0;
    const double r_in = s.rho(psi_at(S * s.coils, S)) * std::cos(kPi / S);
    std::vector<std::pair<Point2, Point2>> pieces;
    Point2 d = b - a;
    double dd = dot(d, d);
    double t = dd > 0 ? std::clamp(-dot(a, d) / dd, 0.0, 1.0) : 0.0;
    if (t > 0 && t < 1) {
        Point2 m = a + d * t;
        pieces.push_back({a, m});
        pieces.push_back({m, b});
    } else {
        pieces.push_back({a, b});
    }
    const double step = 2.0 * kPi / S;
    for (const auto& [p, q] : pieces) {
        double rp = norm(p), rq = norm(q);
        if (std::max(rp, rq) < r_in || std::min(rp, rq) > r_out) continue;
        double th = std::atan2(p.y, p.x);
        double sweep = std::atan2(cross(p, q), dot(p, q));
        double lo = std::min(th, th + sweep), hi = std::max(th, th + sweep);
        std::vector<double> cuts{0.0, 1.0};
        for (long long k = static_cast<long long>(std::ceil(lo / step)); k * step <= hi; ++k) {
            double ang = k * step;
            if (ang <= lo || ang >= hi) continue;
            Point2 e{std::cos(ang), std::sin(ang)};
            double cp = cross(e, p), cq = cross(e, q);
            if (cp == cq) continue;
            cuts.push_back(std::clamp(cp / (cp - cq), 0.0, 1.0));
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            Point2 u = p + (q - p) * cuts[c], v = p + (q - p) * cuts[c + 1];
            Point2 mid = (u + v) * 0.5;
            if (norm(mid) == 0.0) continue;
            if (sector_piece_hits(s, S, sector_of(mid, S), u, v)) return true;
        }
    }
    return false;
}

bool plane_point_on(const SpiralStrip& s, int S, const Point2& p, double tol) {
    double r = norm(p);
    const double r_in = s.rho(psi_at(S * s.coils, S)) * std::cos(kPi / S);
    if (r > s.rho0 + tol || r < r_in - tol) return false;
    int i = sector_of(p, S);
    SectorCoords q = sector_coords(p, i, S);
    int k = chords_outside(s, S, i, q);
    for (int m : {k - 1, k})
        if (m >= 0 && m < s.coils && std::abs(chord_h(s, S, i, m, q)) * s.rho0 <= tol) return true;
    return false;
}

// Exact crossing test between two strips sharing a t-range: chords in one sector cross iff the
// radius differences at the two bounding rays change sign.
bool strips_collide(const SpiralStrip& A, const SpiralStrip& B, int S) {
    double lo = std::max(A.c, B.c), hi = std::min(11.0 * A.c, 11.0 * B.c);
    if (lo > hi) return false;
    auto R = [S](const SpiralStrip& s, int n) { return vertex_radius(s, n, S) / s.c; };
    // Number of B chords whose ray-i vertex lies strictly inside radius r.
    auto count_inside = [&](int i, double r) {
        int lo_m = 0, hi_m = B.coils;  // B radii decrease in m
        while (lo_m < hi_m) {
            int mid = (lo_m + hi_m) / 2;
            if (R(B, i + S * mid) >= r)
                lo_m = mid + 1;
            else
                hi_m = mid;
        }
        return lo_m;
    };
    for (int i = 0; i < S; ++i)
        for (int m = 0; m < A.coils; ++m) {
            double a0 = R(A, i + S * m), a1 = R(A, i + 1 + S * m);
            int k0 = count_inside(i, a0), k1 = count_inside(i + 1, a1);
            if (k0 != k1) return true;
            if (k0 < B.coils && (R(B, i + S * k0) == a0 || R(B, i + 1 + S * k0) == a1)) return true;
        }
    return false;
}

struct RayInfo {
    int level, k;
    double phi, c, rho0, T;
};

std::vector<RayInfo> scene_rays(int J) {
    std::vector<RayInfo> out;
    for (int j = 1; j <= J; ++j) {
        long long kj = level_count(j);
        double base = std::pow(2.0 * kPi, -j) * kPi / 6.0;
        double r = std::ldexp(1.0, -j);
        for (long long k = 1; k <= kj; ++k) {
            double phi = static_cast<double>(k) * base;
            out.push_back({j, static_cast<int>(k), phi, r * std::cos(phi), r * std::sin(phi), std::tan(phi)});
        }
    }
    return out;
}

bool t_ranges_overlap(double c1, double c2) { return std::max(c1, c2) <= 11.0 * std::min(c1, c2); }

SpiralStrip make_strip(const RayInfo& r, int M, double shrink) {
    SpiralStrip s;
    s.level = r.level;
    s.k = r.k;
    s.phi = r.phi;
    s.c = r.c;
    s.rho0 = r.rho0;
    s.coils = M;
    s.shrink = shrink;
    s.eps = shrink * r.rho0 / (2.0 * kPi * M);
    return s;
}

}  // namespace

Point2 SpiralStrip::plane_point(double psi) const {
    double r = rho(psi);
    return {r * std::cos(psi), r * std::sin(psi)};
}

Point3 SpiralStrip::point(double psi, double lambda) const {
    Point2 q = plane_point(psi);
    return Point3{c, q.x, q.y} * lambda;
}

namespace {

// Exact sleeve test: a point between chords cnt-1 and cnt of sector i sits at unrolled sleeve
// position g = (cnt - 1) S + i. The segment is admissible when every piece between ray crossings
// stays in one gap inside the sleeve and consecutive pieces are adjacent.
class SleeveTest {
public:
    SleeveTest(const SpiralStrip& s, int S) : s_(s), S_(S) {}

    // gu, gv: sleeve positions of the endpoints in samples; a wall vertex at position g borders
    // gaps g - 1 and g on its own side only.
    bool operator()(const Point2& u, const Point2& v, long long gu, long long gv) const {
        const double step = 2.0 * kPi / S_;
        std::vector<double> cuts{0.0, 1.0};
        Point2 d = v - u;
        double dd = dot(d, d);
        if (dd > 0) {
            double t = -dot(u, d) / dd;
            if (t > 0 && t < 1) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> all = cuts;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            Point2 p = u + d * cuts[c], q = u + d * cuts[c + 1];
            double th = std::atan2(p.y, p.x);
            double sweep = std::atan2(cross(p, q), dot(p, q));
            double lo = std::min(th, th + sweep), hi = std::max(th, th + sweep);
            for (long long k = static_cast<long long>(std::ceil(lo / step)); k * step <= hi; ++k) {
                double ang = k * step;
                if (ang <= lo || ang >= hi) continue;
                Point2 e{std::cos(ang), std::sin(ang)};
                double cp = cross(e, p), cq = cross(e, q);
                if (cp == cq) continue;
                double t = std::clamp(cp / (cp - cq), 0.0, 1.0);
                all.push_back(cuts[c] + t * (cuts[c + 1] - cuts[c]));
            }
        }
        std::sort(all.begin(), all.end());
        const long long g_max = static_cast<long long>(S_) * (s_.coils - 1) - 1;
        std::vector<long long> reach{gu - 1, gu}, next;
        for (std::size_t c = 0; c + 1 < all.size(); ++c) {
            Point2 p = u + d * all[c], q = u + d * all[c + 1];
            Point2 mid = (p + q) * 0.5;
            if (norm(mid) == 0.0) return false;
            int i = sector_of(mid, S_);
            SectorCoords a = sector_coords(p, i, S_), b = sector_coords(q, i, S_), m = sector_coords(mid, i, S_);
            // No chord with strictly opposite signs at the two ends.
            if (count_below(i, b, kTol) < count_below(i, a, -kTol) || count_below(i, a, kTol) < count_below(i, b, -kTol))
                return false;
            // Gaps the piece may occupy: two of them when it runs along a chord.
            next.clear();
            for (int cnt = count_below(i, m, -kTol); cnt <= count_below(i, m, kTol); ++cnt) {
                long long g = static_cast<long long>(cnt - 1) * S_ + i;
                if (g < 0 || g > g_max) continue;
                for (long long r : reach)
                    if (std::abs(g - r) <= 1) {
                        next.push_back(g);
                        break;
                    }
            }
            if (next.empty()) return false;
            reach.swap(next);
        }
        for (long long r : reach)
            if (r == gv - 1 || r == gv) return true;
        return false;
    }

private:
    static constexpr double kTol = 1e-11;
    // #{m : h_m < thr}
    int count_below(int i, const SectorCoords& q, double thr) const {
        int lo = 0, hi = s_.coils;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (chord_h(s_, S_, i, mid, q) < thr)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }
    const SpiralStrip& s_;
    int S_;
};

LabyrinthResult labyrinth_impl(const SpiralStrip& s, int S, double target, bool reference) {
    LabyrinthResult out;
    const int M = s.coils;
    if (M < 2) return out;
    // The reference run pulls both walls into the sleeve by a small fraction of the coil gap,
    // which makes the polygon simple.
    const double inset = reference ? 1e-4 * 2.0 * kPi * s.eps : 0.0;
    auto wall = [&](int n, double dr) {
        double psi = psi_at(n, S);
        double r = s.rho(psi) + dr;
        return Point2{r * std::cos(psi), r * std::sin(psi)};
    };
    std::vector<Point2> ring;
    std::vector<double> sigma;
    for (int n = 0; n <= S * (M - 1); ++n) {
        ring.push_back(wall(n, -inset));
        sigma.push_back(psi_at(n, S));
    }
    const int n_outer = static_cast<int>(ring.size());
    for (int n = S * M; n >= S; --n) {
        ring.push_back(wall(n, inset));
        sigma.push_back(psi_at(n, S) - 2.0 * kPi);
    }
    for (int n = S; n < S * M; ++n)
        out.inner_wall_length += distance(s.plane_point(psi_at(n, S)), s.plane_point(psi_at(n + 1, S)));

    std::optional<FreeSpace> fs;
    if (reference) {
        PlanarDomain d;
        d.kind = DomainKind::bounded;
        Loop loop;
        for (std::size_t i = 0; i < ring.size(); ++i)
            loop.edges.push_back(Edge::segment(ring[i], ring[(i + 1) % ring.size()]));
        d.loops.push_back(loop);
        fs.emplace(d, 1.0, d.tol.eps_flat);
    }
    SleeveTest sleeve(s, S);
    const double eps = 1e-12 * s.rho0;
    auto position = [S](double sg) { return std::llround(sg * S / (2.0 * kPi)); };
    auto admissible = [&](const Point2& a, const Point2& b, double sa, double sb) {
        return reference ? fs->segment_admissible(a, b) : sleeve(a, b, position(sa), position(sb));
    };

    // A straight segment inside the sleeve stays in the annulus between the innermost chord
    // and the outer radius, which bounds its polar sweep.
    const double r_in = s.rho(psi_at(S * M, S)) * std::cos(kPi / S);
    const double window = reference ? kInf : 2.0 * std::acos(std::min(1.0, r_in / s.rho0)) + 2.0 * kPi / S + 1e-9;

    std::vector<Point2> pts = ring;
    std::vector<double> sig = sigma;
    const Point2 e0 = ring[0], e1 = ring.back();
    const Point2 x0 = ring[n_outer - 1], x1 = ring[n_outer];
    const double sig_exit = 2.0 * kPi * (M - 1);
    std::vector<int> entrance_nodes{0, static_cast<int>(ring.size()) - 1};
    std::vector<int> exit_nodes{n_outer - 1, n_outer};
    auto add_foot = [&](int v, const Point2& a, const Point2& b, double sg, std::vector<int>& side) {
        double t = project_param(pts[v], a, b);
        if (t <= 0.0 || t >= 1.0) return;
        Point2 f = a + (b - a) * t;
        if (distance(f, pts[v]) <= eps) return;
        pts.push_back(f);
        sig.push_back(sg);
        side.push_back(static_cast<int>(pts.size()) - 1);
    };
    for (int v = 0; v < static_cast<int>(ring.size()); ++v) {
        if (sigma[v] <= window) add_foot(v, e0, e1, 0.0, entrance_nodes);
        if (sigma[v] >= sig_exit - window) add_foot(v, x0, x1, sig_exit, exit_nodes);
    }

    const int N = static_cast<int>(pts.size());
    std::vector<int> order(N);
    for (int i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b] || (sig[a] == sig[b] && a < b); });
    std::vector<double> sorted_sig(N);
    for (int i = 0; i < N; ++i) sorted_sig[i] = sig[order[i]];

    std::vector<std::vector<std::pair<int, double>>> fwd(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ui) {
        int u = static_cast<int>(ui);
        auto first = std::lower_bound(sorted_sig.begin(), sorted_sig.end(), sig[u] - window) - sorted_sig.begin();
        for (auto k = first; k < N && sorted_sig[k] <= sig[u] + window; ++k) {
            int v = order[k];
            if (v <= u) continue;
            double w = distance(pts[u], pts[v]);
            if (w <= eps) continue;
            if (admissible(pts[u], pts[v], sig[u], sig[v])) fwd[u].push_back({v, w});
        }
    });
    std::vector<std::vector<std::pair<int, double>>> adj(N + 2);
    for (int u = 0; u < N; ++u)
        for (auto [v, w] : fwd[u]) {
            adj[u].push_back({v, w});
            adj[v].push_back({u, w});
        }
    const int src = N, dst = N + 1;
    for (int v : entrance_nodes) adj[src].push_back({v, 0.0});
    for (int v : exit_nodes) adj[v].push_back({dst, 0.0});

    std::vector<double> dist(N + 2, kInf);
    std::vector<int> pred(N + 2, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u]) continue;
        if (u == dst) break;
        for (auto [v, w] : adj[u])
            if (du + w < dist[v]) {
                dist[v] = du + w;
                pred[v] = u;
                pq.push({dist[v], v});
            }
    }
    for (int v = pred[dst]; v >= 0 && v < N; v = pred[v]) out.path.push_back(pts[v]);
    std::reverse(out.path.begin(), out.path.end());
    out.nodes = N;
    out.length = dist[dst];
    out.passed = std::isfinite(out.length) && out.length >= target;
    return out;
}

}  // namespace

LabyrinthResult labyrinth_check(const SpiralStrip& s, int S, double target) { return labyrinth_impl(s, S, target, false); }

LabyrinthResult labyrinth_check_reference(const SpiralStrip& s, int S, double target) {
    return labyrinth_impl(s, S, target, true);
}

SpiralScene gen_spiral_scene(int J, const SpiralOptions& opts) {
    if (J < 1 || J > 2) throw std::invalid_argument("spiral scene depth must be in [1, 2]");
    const int S = opts.samples_per_coil;
    if (S < 8) throw std::invalid_argument("samples per coil must be >= 8");
    if (!opts.coils.empty() && static_cast<int>(opts.coils.size()) != J)
        throw std::invalid_argument("one coil count per level expected");
    if (!opts.shrink.empty() && static_cast<int>(opts.shrink.size()) != J)
        throw std::invalid_argument("one shrink value per level expected");

    SpiralScene scene;
    scene.depth = J;
    scene.samples_per_coil = S;
    auto rays = scene_rays(J);

    // Shrink: half of the tightest relative gap to a lower ray whose t-range overlaps.
    for (int j = 1; j <= J; ++j) {
        double s = 0.25;
        if (!opts.shrink.empty()) {
            s = opts.shrink[j - 1];
            if (!(s > 0 && s < 1)) throw std::invalid_argument("shrink must be in (0, 1)");
        } else {
            for (const auto& a : rays) {
                if (a.level != j) continue;
                for (const auto& b : rays)
                    if (b.T < a.T && t_ranges_overlap(a.c, b.c)) s = std::min(s, 0.5 * (1.0 - b.T / a.T));
            }
        }
        scene.shrink.push_back(s);
    }

    for (int j = 1; j <= J; ++j) {
        int M = 0;
        if (!opts.coils.empty()) {
            M = opts.coils[j - 1];
            if (M < 2) throw std::invalid_argument("coil count must be >= 2");
        } else {
            const RayInfo* tight = nullptr;
            for (const auto& r : rays)
                if (r.level == j && (!tight || r.rho0 < tight->rho0)) tight = &r;
            M = 2;
            while (M <= (1 << 14)) {
                if (labyrinth_check(make_strip(*tight, M, scene.shrink[j - 1]), S, opts.labyrinth_target).passed) break;
                M *= 2;
            }
            if (M > (1 << 14)) throw std::runtime_error("no coil count up to 16384 passes the labyrinth check");
        }
        scene.coils.push_back(M);
    }
    for (const auto& r : rays) scene.strips.push_back(make_strip(r, scene.coils[r.level - 1], scene.shrink[r.level - 1]));

    for (std::size_t a = 0; a < scene.strips.size(); ++a)
        for (std::size_t b = 0; b < scene.strips.size(); ++b) {
            if (a == b) continue;
            const auto &A = scene.strips[a], &B = scene.strips[b];
            if (std::tan(B.phi) > std::tan(A.phi)) continue;
            if (strips_collide(A, B, S))
                throw std::invalid_argument("strips intersect: (" + std::to_string(A.level) + "," + std::to_string(A.k) +
                                            ") and (" + std::to_string(B.level) + "," + std::to_string(B.k) + ")");
        }
    return scene;
}

Mesh strip_mesh(const SpiralStrip& s, int S) {
    Mesh m;
    const int n = S * s.coils;
    for (int i = 0; i <= n; ++i) {
        double psi = psi_at(i, S);
        m.vertices.push_back(s.point(psi, 1.0));
        m.vertices.push_back(s.point(psi, 11.0));
    }
    for (int i = 0; i < n; ++i) {
        int a = 2 * i, b = 2 * i + 1, c = 2 * i + 2, d = 2 * i + 3;
        m.faces.push_back({a, c, d});
        m.faces.push_back({a, d, b});
    }
    return m;
}

bool segment_hits_strip(const SpiralStrip& s, int S, const Point3& p, const Point3& q) {
    const double c0 = s.c, c1 = 11.0 * s.c;
    double u0 = 0.0, u1 = 1.0;
    double dt = q.x - p.x;
    if (dt == 0.0) {
        if (p.x < c0 || p.x > c1) return false;
    } else {
        double a = (c0 - p.x) / dt, b = (c1 - p.x) / dt;
        u0 = std::max(u0, std::min(a, b));
        u1 = std::min(u1, std::max(a, b));
        if (u0 > u1) return false;
    }
    auto project = [&](double u) {
        Point3 r = p + (q - p) * u;
        double sc = s.c / r.x;
        return Point2{r.y * sc, r.z * sc};
    };
    return plane_segment_hits(s, S, project(u0), project(u1));
}

namespace {

double orient_d(const Point3& n, double d, const Point3& p) { return dot(n, p) + d; }

bool coplanar_overlap(const std::array<Point3, 3>& a, const std::array<Point3, 3>& b, const Point3& n) {
    int drop = 0;
    double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    if (ay >= ax && ay >= az) drop = 1;
    if (az >= ax && az >= ay) drop = 2;
    auto to2 = [drop](const Point3& p) {
        if (drop == 0) return Point2{p.y, p.z};
        if (drop == 1) return Point2{p.x, p.z};
        return Point2{p.x, p.y};
    };
    std::array<Point2, 3> A{to2(a[0]), to2(a[1]), to2(a[2])}, B{to2(b[0]), to2(b[1]), to2(b[2])};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (segments_intersect(A[i], A[(i + 1) % 3], B[j], B[(j + 1) % 3], 0.0)) return true;
    auto inside = [](const std::array<Point2, 3>& t, const Point2& p) {
        int s0 = orient2d_sign(t[0], t[1], p), s1 = orient2d_sign(t[1], t[2], p), s2 = orient2d_sign(t[2], t[0], p);
        return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
    };
    return inside(A, B[0]) || inside(B, A[0]);
}

// Interval of the triangle on the intersection line (projected coordinates p, signed distances d).
bool line_interval(const double p[3], const double d[3], double& t0, double& t1) {
    auto alone = [&](int k, int i, int j) {
        t0 = p[k] + (p[i] - p[k]) * d[k] / (d[k] - d[i]);
        t1 = p[k] + (p[j] - p[k]) * d[k] / (d[k] - d[j]);
        if (t0 > t1) std::swap(t0, t1);
        return true;
    };
    if (d[0] * d[1] > 0) return alone(2, 0, 1);
    if (d[0] * d[2] > 0) return alone(1, 0, 2);
    if (d[1] * d[2] > 0 || d[0] != 0) return alone(0, 1, 2);
    if (d[1] != 0) return alone(1, 0, 2);
    if (d[2] != 0) return alone(2, 0, 1);
    return false;
}

}  // namespace

bool triangles_intersect(const std::array<Point3, 3>& a, const std::array<Point3, 3>& b) {
    Point3 n2 = cross(b[1] - b[0], b[2] - b[0]);
    double d2 = -dot(n2, b[0]);
    double da[3];
    double scale_b = norm(n2) * std::max({norm(a[1] - a[0]), norm(a[2] - a[0]), norm(b[1] - b[0]), 1e-300});
    for (int i = 0; i < 3; ++i) {
        da[i] = orient_d(n2, d2, a[i]);
        if (std::abs(da[i]) <= 1e-14 * scale_b) da[i] = 0.0;
    }
    if ((da[0] > 0 && da[1] > 0 && da[2] > 0) || (da[0] < 0 && da[1] < 0 && da[2] < 0)) return false;
    Point3 n1 = cross(a[1] - a[0], a[2] - a[0]);
    double d1 = -dot(n1, a[0]);
    double db[3];
    double scale_a = norm(n1) * std::max({norm(b[1] - b[0]), norm(b[2] - b[0]), norm(a[1] - a[0]), 1e-300});
    for (int i = 0; i < 3; ++i) {
        db[i] = orient_d(n1, d1, b[i]);
        if (std::abs(db[i]) <= 1e-14 * scale_a) db[i] = 0.0;
    }
    if ((db[0] > 0 && db[1] > 0 && db[2] > 0) || (db[0] < 0 && db[1] < 0 && db[2] < 0)) return false;
    if (da[0] == 0 && da[1] == 0 && da[2] == 0) return coplanar_overlap(a, b, n1);
    Point3 D = cross(n1, n2);
    int axis = 0;
    if (std::abs(D.y) > std::abs(D.x)) axis = 1;
    if (std::abs(D.z) > std::max(std::abs(D.x), std::abs(D.y))) axis = 2;
    auto comp = [axis](const Point3& p) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; };
    double pa[3] = {comp(a[0]), comp(a[1]), comp(a[2])};
    double pb[3] = {comp(b[0]), comp(b[1]), comp(b[2])};
    double a0, a1, b0, b1;
    if (!line_interval(pa, da, a0, a1) || !line_interval(pb, db, b0, b1)) return coplanar_overlap(a, b, n1);
    return !(a1 < b0 || b1 < a0);
}

DisjointnessReport check_strips_disjoint(const SpiralScene& scene, long long max_triangles) {
    DisjointnessReport rep;
    const int S = scene.samples_per_coil;
    const auto& st = scene.strips;
    rep.band_certificate = true;
    for (std::size_t a = 0; a < st.size(); ++a)
        for (std::size_t b = 0; b < st.size(); ++b) {
            if (a == b || !t_ranges_overlap(st[a].c, st[b].c)) continue;
            double Ta = st[a].rho0 / st[a].c, Tb = st[b].rho0 / st[b].c;
            if (Tb >= Ta) continue;
            if (!(Ta * (1.0 - st[a].shrink) > Tb)) rep.band_certificate = false;
            if (!rep.first_colliding && strips_collide(st[a], st[b], S))
                rep.first_colliding = std::make_pair(static_cast<int>(a), static_cast<int>(b));
        }

    for (const auto& s : st) rep.triangle_count += 2LL * S * s.coils;
    if (rep.triangle_count > max_triangles) return rep;
    rep.triangle_test_run = true;

    struct Tri {
        std::array<Point3, 3> v;
        Point3 lo, hi;
        int strip;
    };
    std::vector<Tri> tris;
    for (std::size_t k = 0; k < st.size(); ++k) {
        Mesh m = strip_mesh(st[k], S);
        for (const auto& f : m.faces) {
            Tri t{{m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]}, {}, {}, static_cast<int>(k)};
            t.lo = {std::min({t.v[0].x, t.v[1].x, t.v[2].x}), std::min({t.v[0].y, t.v[1].y, t.v[2].y}),
                    std::min({t.v[0].z, t.v[1].z, t.v[2].z})};
            t.hi = {std::max({t.v[0].x, t.v[1].x, t.v[2].x}), std::max({t.v[0].y, t.v[1].y, t.v[2].y}),
                    std::max({t.v[0].z, t.v[1].z, t.v[2].z})};
            tris.push_back(t);
        }
    }
    std::sort(tris.begin(), tris.end(), [](const Tri& a, const Tri& b) { return a.lo.y < b.lo.y; });
    std::vector<long long> tested(tris.size(), 0);
    std::vector<int> hit(tris.size(), -1);
    parallel_for(tris.size(), [&](std::size_t i) {
        for (std::size_t j = i + 1; j < tris.size() && tris[j].lo.y <= tris[i].hi.y; ++j) {
            const Tri &a = tris[i], &b = tris[j];
            if (a.strip == b.strip) continue;
            if (a.hi.x < b.lo.x || b.hi.x < a.lo.x || a.hi.z < b.lo.z || b.hi.z < a.lo.z) continue;
            ++tested[i];
            if (triangles_intersect(a.v, b.v)) {
                hit[i] = static_cast<int>(j);
                return;
            }
        }
    });
    rep.triangle_disjoint = true;
    for (std::size_t i = 0; i < tris.size(); ++i) {
        rep.triangle_pairs_tested += tested[i];
        if (hit[i] >= 0 && rep.triangle_disjoint) {
            rep.triangle_disjoint = false;
            if (!rep.first_colliding) rep.first_colliding = std::make_pair(tris[i].strip, tris[hit[i]].strip);
        }
    }
    return rep;
}

bool probe_segments_clear(const SpiralScene& scene, int samples) {
    const Point3 A{1.0, 0.0, 0.0}, D{std::cos(kPi / 6), std::sin(kPi / 6), 0.0};
    for (int i = 1; i <= samples; ++i) {
        double u = static_cast<double>(i) / samples;
        for (const Point3& p : {A * u, D * u})
            for (const auto& s : scene.strips) {
                if (p.x < s.c || p.x > 11.0 * s.c) continue;
                Point2 q{p.y * s.c / p.x, p.z * s.c / p.x};
                if (plane_point_on(s, scene.samples_per_coil, q, 1e-15)) return false;
            }
    }
    return true;
}

// ---------------------------------------------------------------------------

MeshReport inspect_mesh(const Mesh& m) {
    MeshReport r;
    std::map<std::pair<int, int>, std::pair<int, int>> edges;  // undirected -> (count, directed balance)
    for (const auto& f : m.faces) {
        const Point3& a = m.vertices[f[0]];
        const Point3& b = m.vertices[f[1]];
        const Point3& c = m.vertices[f[2]];
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || norm(cross(b - a, c - a)) == 0.0) ++r.degenerate_faces;
        for (int k = 0; k < 3; ++k) {
            int u = f[k], v = f[(k + 1) % 3];
            auto key = std::minmax(u, v);
            auto& e = edges[{key.first, key.second}];
            ++e.first;
            e.second += (u < v) ? 1 : -1;
        }
    }
    r.edge_manifold = true;
    r.closed = true;
    r.oriented = true;
    for (const auto& [k, e] : edges) {
        if (e.first > 2) r.edge_manifold = false;
        if (e.first != 2) r.closed = false;
        if (e.first == 1) ++r.boundary_edges;
        if (e.first == 2 && e.second != 0) r.oriented = false;
    }
    r.euler_characteristic = static_cast<int>(m.vertices.size()) - static_cast<int>(edges.size()) +
                             static_cast<int>(m.faces.size());
    return r;
}

std::string mesh_to_obj(const std::vector<Mesh>& meshes, const std::vector<std::string>& names) {
    std::ostringstream os;
    os.precision(17);
    std::size_t offset = 1;
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        os << "o " << (i < names.size() ? names[i] : "mesh" + std::to_string(i)) << "\n";
        for (const auto& v : meshes[i].vertices) os << "v " << v.x << " " << v.y << " " << v.z << "\n";
        for (const auto& f : meshes[i].faces)
            os << "f " << f[0] + offset << " " << f[1] + offset << " " << f[2] + offset << "\n";
        offset += meshes[i].vertices.size();
    }
    return os.str();
}

// ---------------------------------------------------------------------------

GeodesicLevel estimate_3d_level(const SpiralScene& scene, int level, const Geodesic3DOptions& opts) {
    GeodesicLevel out;
    out.level = level;
    out.depth = scene.depth;
    out.exclusion_radius = 1.5 * std::ldexp(1.0, -scene.depth);
    out.shells_per_octave = opts.shells_per_octave;
    const int n = opts.shells_per_octave, NA = opts.cone_rings;
    const double r_ex = out.exclusion_radius;
    const int i_min = static_cast<int>(std::ceil(n * std::log2(r_ex)));
    const int i_max = static_cast<int>(std::floor(n * std::log2(opts.outer_radius)));
    auto ring_size = [](int a) { return a == 0 ? 1 : 6 * a; };
    std::vector<int> ring_off(NA + 2, 0);
    for (int a = 0; a <= NA; ++a) ring_off[a + 1] = ring_off[a] + ring_size(a);
    const int per_shell = ring_off[NA + 1];
    const int shells = i_max - i_min + 1;

    std::vector<Point3> nodes;
    nodes.reserve(static_cast<std::size_t>(shells) * per_shell + 1);
    for (int i = i_min; i <= i_max; ++i) {
        double r = std::exp2(static_cast<double>(i) / n);
        for (int a = 0; a <= NA; ++a) {
            double al = (kPi / 6.0) * a / NA;
            for (int b = 0; b < ring_size(a); ++b) {
                double be = 2.0 * kPi * b / ring_size(a);
                nodes.push_back({r * std::cos(al), r * std::sin(al) * std::cos(be), r * std::sin(al) * std::sin(be)});
            }
        }
    }
    const int O = static_cast<int>(nodes.size());
    nodes.push_back({0.0, 0.0, 0.0});
    auto index = [&](int i, int a, int b) { return (i - i_min) * per_shell + ring_off[a] + ((b % ring_size(a)) + ring_size(a)) % ring_size(a); };

    std::vector<std::pair<int, int>> cand;
    for (int i = i_min; i <= i_max; ++i)
        for (int a = 0; a <= NA; ++a)
            for (int b = 0; b < ring_size(a); ++b) {
                int u = index(i, a, b);
                double be = 2.0 * kPi * b / ring_size(a);
                for (int di = 0; di <= 1; ++di) {
                    if (i + di > i_max) continue;
                    for (int da = -1; da <= 1; ++da) {
                        int a2 = a + da;
                        if (a2 < 0 || a2 > NA) continue;
                        int m2 = ring_size(a2);
                        int b_lo = static_cast<int>(std::floor(be * m2 / (2.0 * kPi) + 1e-12));
                        for (int b2 : {b_lo, b_lo + 1}) {
                            int v = index(i + di, a2, b2);
                            if (v != u) cand.push_back(std::minmax(u, v));
                        }
                    }
                }
                if (i == i_min) cand.push_back({u, O});
            }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    const int S = scene.samples_per_coil;
    std::vector<char> ok(cand.size(), 0);
    parallel_for(cand.size(), [&](std::size_t k) {
        auto [u, v] = cand[k];
        const Point3 &p = nodes[u], &q = nodes[v];
        if (u != O && v != O) {
            Point3 d = q - p;
            double t = std::clamp(-dot(p, d) / dot(d, d), 0.0, 1.0);
            if (norm(p + d * t) < r_ex * (1.0 - 1e-12)) return;
        }
        if (opts.with_strips)
            for (const auto& s : scene.strips)
                if (segment_hits_strip(s, S, p, q)) return;
        ok[k] = 1;
    });

    const int N = static_cast<int>(nodes.size());
    std::vector<std::vector<std::pair<int, double>>> adj(N);
    for (std::size_t k = 0; k < cand.size(); ++k) {
        if (!ok[k]) continue;
        auto [u, v] = cand[k];
        double w = distance(nodes[u], nodes[v]);
        adj[u].push_back({v, w});
        adj[v].push_back({u, w});
        ++out.edges;
    }
    out.nodes = N;

    // O is a boundary point: paths between other points may not pass through it.
    auto dijkstra = [&](int s) {
        std::vector<double> dist(N, kInf);
        using QE = std::pair<double, int>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        dist[s] = 0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > dist[u]) continue;
            if (u == O && s != O) continue;
            for (auto [v, w] : adj[u])
                if (du + w < dist[v]) {
                    dist[v] = du + w;
                    pq.push({dist[v], v});
                }
        }
        return dist;
    };
    const int A = index(0, 0, 0), Dn = index(0, NA, 0);
    auto from_a = dijkstra(A), from_o = dijkstra(O);
    out.d_AO = from_a[O];
    out.d_AD = from_a[Dn];
    out.d_OD = from_o[Dn];
    out.connected = std::isfinite(out.d_AO) && std::isfinite(out.d_AD) && std::isfinite(out.d_OD);
    return out;
}

std::vector<GeodesicLevel> estimate_3d_geodesics(const std::vector<SpiralScene>& scenes, const Geodesic3DOptions& opts) {
    std::vector<GeodesicLevel> out;
    for (std::size_t i = 0; i < scenes.size(); ++i) out.push_back(estimate_3d_level(scenes[i], static_cast<int>(i) + 1, opts));
    return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const SpiralScene& s) {
    nlohmann::json strips = nlohmann::json::array();
    for (const auto& st : s.strips)
        strips.push_back({{"level", st.level},
                          {"k", st.k},
                          {"phi", st.phi},
                          {"c", st.c},
                          {"rho0", st.rho0},
                          {"eps", st.eps},
                          {"coils", st.coils},
                          {"shrink", st.shrink}});
    return {{"type", "spiral_scene"},
            {"depth", s.depth},
            {"samples_per_coil", s.samples_per_coil},
            {"coils", s.coils},
            {"shrink", s.shrink},
            {"strips", strips}};
}

nlohmann::json to_json(const LabyrinthResult& r) {
    return {{"length", r.length}, {"inner_wall_length", r.inner_wall_length}, {"nodes", r.nodes}, {"passed", r.passed}};
}

nlohmann::json to_json(const DisjointnessReport& r) {
    nlohmann::json j{{"band_certificate", r.band_certificate},
                     {"triangle_test_run", r.triangle_test_run},
                     {"triangle_disjoint", r.triangle_disjoint},
                     {"triangle_pairs_tested", r.triangle_pairs_tested},
                     {"triangle_count", r.triangle_count}};
    if (r.first_colliding) j["first_colliding"] = {r.first_colliding->first, r.first_colliding->second};
    return j;
}

nlohmann::json to_json(const GeodesicLevel& g) {
    return {{"level", g.level},
            {"depth", g.depth},
            {"exclusion_radius", g.exclusion_radius},
            {"shells_per_octave", g.shells_per_octave},
            {"nodes", g.nodes},
            {"edges", g.edges},
            {"d_AO", g.d_AO},
            {"d_OD", g.d_OD},
            {"d_AD", g.d_AD},
            {"connected", g.connected},
            {"kind", "graph upper bound (evidence, not certificate)"}};
}

nlohmann::json to_json(const MeshReport& r) {
    return {{"edge_manifold", r.edge_manifold},
            {"closed", r.closed},
            {"oriented", r.oriented},
            {"degenerate_faces", r.degenerate_faces},
            {"euler_characteristic", r.euler_characteristic},
            {"boundary_edges", r.boundary_edges}};
}

}  // namespace relmetric
