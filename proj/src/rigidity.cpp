#include "relmetric/rigidity.hpp"

#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

#include "relmetric/geodesic.hpp"
#include "relmetric/parallel.hpp"

namespace relmetric {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPoly>;

constexpr double kInf = std::numeric_limits<double>::infinity();

BPoly to_bpoly(const std::vector<std::vector<Point2>>& rings, const RigidMotion2* m = nullptr) {
    BPoly p;
    auto fill = [&](auto& r, const std::vector<Point2>& pts) {
        for (const auto& v : pts) {
            Point2 w = m ? m->apply(v) : v;
            r.push_back({w.x, w.y});
        }
        if (!pts.empty()) {
            Point2 w = m ? m->apply(pts.front()) : pts.front();
            r.push_back({w.x, w.y});
        }
    };
    fill(p.outer(), rings.at(0));
    for (std::size_t i = 1; i < rings.size(); ++i) {
        p.inners().emplace_back();
        fill(p.inners().back(), rings[i]);
    }
    bg::correct(p);
    return p;
}

nlohmann::json diagnostics_json(const DomainDiagnostics& g) {
    return {{"is_bounded", g.is_bounded},
            {"is_convex", g.is_convex},
            {"is_strictly_convex", g.is_strictly_convex_flag},
            {"boundary_collinear", g.boundary_collinear},
            {"is_halfplane", g.is_halfplane},
            {"boundary_components", g.boundary_components},
            {"boundary_single_point", g.boundary_single_point}};
}

double scale_of(const PlanarDomain& d) { return std::max(1.0, d.max_coordinate()); }

GeodesicEngine engine_for(const PlanarDomain& d, const std::vector<BoundaryPoint>& pts) {
    std::vector<Point2> xy;
    xy.reserve(pts.size());
    for (const auto& p : pts) xy.push_back(p.xy);
    EngineOptions o;
    o.box_half_width = GeodesicEngine::box_for(d, xy);
    return GeodesicEngine(d, o);
}

double rho(const GeodesicEngine& e, const BoundaryPoint& a, const BoundaryPoint& b) {
    return e.distance(e.query_for(a), e.query_for(b));
}

double defect(double a, double b) {
    if (std::isinf(a) && std::isinf(b)) return 0.0;
    return std::abs(a - b);
}

const BoundaryCorrespondence::ComponentMap* map_for_u(const BoundaryCorrespondence& f, const BoundaryRef& r) {
    for (const auto& c : f.components)
        if (c.u == r) return &c;
    return nullptr;
}

const BoundaryCorrespondence::ComponentMap* map_for_v(const BoundaryCorrespondence& f, const BoundaryRef& r) {
    for (const auto& c : f.components)
        if (c.v == r) return &c;
    return nullptr;
}

BoundaryPoint apply_forward(const PlanarDomain& V, const BoundaryCorrespondence& f, const BoundaryPoint& p) {
    if (f.forward) return f.forward(p);
    const auto* c = map_for_u(f, p.ref);
    if (!c) throw std::invalid_argument("correspondence has no component for " + p.ref.str());
    return boundary_point_at(V, c->v, c->offset + c->orientation * c->scale * p.s);
}

std::optional<BoundaryPoint> apply_inverse(const PlanarDomain& U, const BoundaryCorrespondence& f,
                                           const BoundaryPoint& q) {
    if (f.forward) {
        if (!f.inverse) return std::nullopt;
        return f.inverse(q);
    }
    const auto* c = map_for_v(f, q.ref);
    if (!c) return std::nullopt;
    return boundary_point_at(U, c->u, c->orientation * (q.s - c->offset) / c->scale);
}

double sampling_length(const PlanarDomain& d, const BoundaryCorrespondence::ComponentMap& c, double& start) {
    if (c.window) {
        start = (*c.window)[0];
        return (*c.window)[1] - (*c.window)[0];
    }
    start = 0.0;
    double L = boundary_length(d, c.u);
    if (!std::isfinite(L)) throw std::invalid_argument("component " + c.u.str() + " is unbounded and needs a window");
    return L;
}

struct LocalOutcome {
    double defect = 0.0;
    int pairs = 0;
};

// Defects among an anchor and its short-range neighbours on one side of the map.
template <class MapFn>
LocalOutcome local_defect(const GeodesicEngine& eu, const GeodesicEngine& ev, const std::vector<BoundaryPoint>& local,
                          const BoundaryPoint& anchor, double epsilon, MapFn&& map) {
    std::vector<BoundaryPoint> src{anchor};
    for (const auto& a : local)
        if (rho(eu, a, anchor) < epsilon) src.push_back(a);
    std::vector<std::optional<BoundaryPoint>> img;
    for (const auto& s : src) img.push_back(map(s));
    LocalOutcome out;
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = i + 1; j < src.size(); ++j) {
            if (!img[i] || !img[j]) continue;
            out.defect = std::max(out.defect, defect(rho(eu, src[i], src[j]), rho(ev, *img[i], *img[j])));
            ++out.pairs;
        }
    return out;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::UniquelyDetermined: return "UniquelyDetermined";
        case Verdict::NotUniquelyDetermined: return "NotUniquelyDetermined";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

Classification classify(const PlanarDomain& d) {
    Classification c;
    DomainDiagnostics g = diagnose(d);
    c.evidence["diagnostics"] = diagnostics_json(g);
    if (g.boundary_collinear) {
        bool connected_many = g.boundary_components == 1 && !g.boundary_single_point;
        c.verdict = connected_many ? Verdict::NotUniquelyDetermined : Verdict::UniquelyDetermined;
        c.rule = "Thm1.1-I";
        return c;
    }
    if (g.is_bounded) {
        c.verdict = Verdict::UniquelyDetermined;
        c.rule = "Cor1.2";
        return c;
    }
    if (g.is_strictly_convex_flag) {
        c.verdict = Verdict::UniquelyDetermined;
        c.rule = "Thm4.3";
        return c;
    }
    if (g.is_convex && !g.is_halfplane) {
        c.verdict = Verdict::UniquelyDetermined;
        c.rule = "Thm1.2";
        return c;
    }
    FuDecomposition fu = decompose_Fu(d);
    c.evidence["F_U"] = to_json(fu);
    if (fu.F_components == 0) {
        c.verdict = Verdict::UniquelyDetermined;
        c.rule = "Cor1.1-1";
    } else if (fu.F_components >= 2) {
        c.verdict = Verdict::UniquelyDetermined;
        c.rule = "Cor1.1-2";
    } else {
        c.verdict = Verdict::Undetermined;
        c.rule = "Thm1.1-II-open";
    }
    return c;
}

std::vector<BoundaryRef> boundary_refs(const PlanarDomain& d) {
    std::vector<BoundaryRef> out;
    for (std::size_t i = 0; i < d.loops.size(); ++i) out.push_back({BoundaryRef::Kind::loop, static_cast<int>(i)});
    for (std::size_t i = 0; i < d.slits.size(); ++i) out.push_back({BoundaryRef::Kind::slit, static_cast<int>(i)});
    for (std::size_t i = 0; i < d.lines.size(); ++i) out.push_back({BoundaryRef::Kind::line, static_cast<int>(i)});
    for (std::size_t i = 0; i < d.halfplanes.size(); ++i)
        out.push_back({BoundaryRef::Kind::halfplane, static_cast<int>(i)});
    return out;
}

BoundaryCorrespondence identity_correspondence(const PlanarDomain& d, double density) {
    BoundaryCorrespondence f;
    f.sample_density = density;
    const double W = 2 * scale_of(d);
    for (const auto& r : boundary_refs(d)) {
        BoundaryCorrespondence::ComponentMap c{r, r};
        if (!std::isfinite(boundary_length(d, r))) c.window = std::array<double, 2>{-W, W};
        f.components.push_back(c);
    }
    return f;
}

BoundaryCorrespondence motion_correspondence(const PlanarDomain& U, const PlanarDomain& V, const RigidMotion2& m,
                                             double density) {
    BoundaryCorrespondence f = identity_correspondence(U, density);
    RigidMotion2 inv = m.inverse();
    const PlanarDomain* Vp = &V;
    const PlanarDomain* Up = &U;
    f.forward = [Vp, m](const BoundaryPoint& p) {
        return locate_boundary_point(*Vp, p.ref, m.apply(p.xy), m.apply_vector(p.inward));
    };
    f.inverse = [Up, inv](const BoundaryPoint& q) {
        return locate_boundary_point(*Up, q.ref, inv.apply(q.xy), inv.apply_vector(q.inward));
    };
    return f;
}

BoundaryCorrespondence correspondence_from_json(const nlohmann::json& j, const PlanarDomain& U, const PlanarDomain& V) {
    BoundaryCorrespondence f;
    f.sample_density = j.value("sample_density", 16.0);
    if (j.contains("components")) {
        for (const auto& c : j.at("components")) {
            BoundaryCorrespondence::ComponentMap m;
            m.u = BoundaryRef::parse(c.at("u").get<std::string>());
            m.v = BoundaryRef::parse(c.at("v").get<std::string>());
            m.orientation = c.value("orientation", 1);
            m.offset = c.value("offset", 0.0);
            m.scale = c.value("scale", 1.0);
            if (c.contains("window")) m.window = std::array<double, 2>{c["window"][0].get<double>(), c["window"][1].get<double>()};
            if (m.orientation != 1 && m.orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
            f.components.push_back(m);
        }
    }
    if (j.contains("samples")) {
        for (const auto& s : j.at("samples")) {
            BoundaryRef ru = BoundaryRef::parse(s.at("u_ref").get<std::string>());
            BoundaryRef rv = BoundaryRef::parse(s.at("v_ref").get<std::string>());
            f.pairs.push_back({boundary_point_at(U, ru, s.at("u_s").get<double>()),
                               boundary_point_at(V, rv, s.at("v_s").get<double>())});
        }
    }
    if (f.components.empty() && f.pairs.empty()) throw std::invalid_argument("map has neither components nor samples");
    return f;
}

nlohmann::json correspondence_to_json(const BoundaryCorrespondence& f) {
    nlohmann::json j;
    j["sample_density"] = f.sample_density;
    if (!f.components.empty()) {
        j["components"] = nlohmann::json::array();
        for (const auto& c : f.components) {
            nlohmann::json e{{"u", c.u.str()}, {"v", c.v.str()}, {"orientation", c.orientation}, {"offset", c.offset}, {"scale", c.scale}};
            if (c.window) e["window"] = {(*c.window)[0], (*c.window)[1]};
            j["components"].push_back(e);
        }
    }
    if (!f.pairs.empty()) {
        j["samples"] = nlohmann::json::array();
        for (const auto& [a, b] : f.pairs)
            j["samples"].push_back({{"u_ref", a.ref.str()}, {"u_s", a.s}, {"v_ref", b.ref.str()}, {"v_s", b.s}});
    }
    return j;
}

void check_bijective(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f) {
    if (f.is_explicit()) return;
    auto valid = [](const PlanarDomain& d, const BoundaryRef& r) {
        auto refs = boundary_refs(d);
        return std::find(refs.begin(), refs.end(), r) != refs.end();
    };
    for (std::size_t i = 0; i < f.components.size(); ++i) {
        const auto& c = f.components[i];
        if (!valid(U, c.u) || !valid(V, c.v))
            throw std::invalid_argument("component mismatch: " + c.u.str() + " -> " + c.v.str() + " does not exist");
        for (std::size_t k = 0; k < i; ++k)
            if (f.components[k].u == c.u || f.components[k].v == c.v)
                throw std::invalid_argument("component mismatch: map is not bijective on components");
        if (!f.forward) {
            double Lu = boundary_length(U, c.u), Lv = boundary_length(V, c.v);
            if (std::isfinite(Lu) != std::isfinite(Lv) ||
                (std::isfinite(Lu) && std::abs(c.scale * Lu - Lv) > U.tol.eps_metric * std::max(1.0, Lv)))
                throw std::invalid_argument("component mismatch: lengths of " + c.u.str() + " and " + c.v.str() + " disagree");
        }
    }
    if (!f.forward && (f.components.size() != boundary_refs(U).size() || f.components.size() != boundary_refs(V).size()))
        throw std::invalid_argument("component mismatch: the map must cover every boundary component of U and V");
}

std::vector<std::pair<BoundaryPoint, BoundaryPoint>> sample_correspondence(const PlanarDomain& U,
                                                                           const PlanarDomain& V,
                                                                           const BoundaryCorrespondence& f,
                                                                           std::uint64_t seed) {
    if (f.is_explicit()) return f.pairs;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<BoundaryPoint, BoundaryPoint>> out;
    for (const auto& c : f.components) {
        double start = 0.0;
        double L = sampling_length(U, c, start);
        int n = std::max(8, static_cast<int>(std::ceil(f.sample_density * L)));
        double shift = unit(rng);
        for (int k = 0; k < n; ++k) {
            BoundaryPoint p = boundary_point_at(U, c.u, start + (k + shift) * L / n);
            out.push_back({p, apply_forward(V, f, p)});
        }
    }
    return out;
}

IsometryReport check_global_isometry(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f,
                                     int samples, std::uint64_t seed) {
    check_bijective(U, V, f);
    IsometryReport rep;
    rep.kind = "global";
    rep.note = "bijective correspondence required (a surjective isometry of the boundary is the weaker notion)";
    auto pool = sample_correspondence(U, V, f, seed);
    if (pool.size() < 2) throw std::invalid_argument("too few samples");
    std::vector<BoundaryPoint> pu, pv;
    for (const auto& [a, b] : pool) {
        pu.push_back(a);
        pv.push_back(b);
    }
    GeodesicEngine eu = engine_for(U, pu), ev = engine_for(V, pv);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (int k = 0; k < samples; ++k) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) j = (j + 1) % pool.size();
        pairs.push_back({i, j});
    }
    std::vector<double> def(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        auto [i, j] = pairs[k];
        def[k] = defect(rho(eu, pu[i], pu[j]), rho(ev, pv[i], pv[j]));
    });
    for (double x : def) rep.max_defect = std::max(rep.max_defect, x);
    rep.pair_count = static_cast<int>(pairs.size());
    RigidSearch rs = find_rigid_motion(U, V, f, seed);
    rep.rigid_motion = rs.motion;
    rep.rigid_residual = rs.residual;
    return rep;
}

IsometryReport check_local_isometry(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f,
                                    double epsilon, int anchors, std::uint64_t seed) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    check_bijective(U, V, f);
    IsometryReport rep;
    rep.kind = "local";
    rep.epsilon_used = epsilon;
    rep.note = "bijective correspondence required (a surjective isometry of the boundary is the weaker notion)";
    auto pool = sample_correspondence(U, V, f, seed);
    if (pool.empty()) throw std::invalid_argument("too few samples");

    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    constexpr int kNeighbours = 4;
    struct Anchor {
        std::size_t idx;
        std::array<double, kNeighbours> du, dv;
    };
    std::vector<Anchor> plan(static_cast<std::size_t>(anchors));
    for (auto& a : plan) {
        a.idx = pick(rng);
        for (auto& x : a.du) x = off(rng) * epsilon;
        for (auto& x : a.dv) x = off(rng) * epsilon;
    }

    // Neighbours along the same component; explicit maps use nearby samples instead.
    auto neighbours_u = [&](const Anchor& a) {
        std::vector<BoundaryPoint> out;
        const BoundaryPoint& y = pool[a.idx].first;
        if (f.is_explicit()) {
            for (const auto& [p, q] : pool)
                if (distance(p.xy, y.xy) < epsilon && distance(p.xy, y.xy) > 0) out.push_back(p);
        } else {
            for (double d : a.du) out.push_back(boundary_point_at(U, y.ref, y.s + d));
        }
        return out;
    };
    auto neighbours_v = [&](const Anchor& a) {
        std::vector<BoundaryPoint> out;
        const BoundaryPoint& y = pool[a.idx].second;
        if (f.is_explicit()) {
            for (const auto& [p, q] : pool)
                if (distance(q.xy, y.xy) < epsilon && distance(q.xy, y.xy) > 0) out.push_back(q);
        } else {
            for (double d : a.dv) out.push_back(boundary_point_at(V, y.ref, y.s + d));
        }
        return out;
    };

    std::vector<BoundaryPoint> all_u, all_v;
    for (const auto& a : plan) {
        all_u.push_back(pool[a.idx].first);
        all_v.push_back(pool[a.idx].second);
        for (const auto& p : neighbours_u(a)) all_u.push_back(p);
        for (const auto& q : neighbours_v(a)) all_v.push_back(q);
    }
    // Images are needed in both engines' boxes.
    for (const auto& [p, q] : pool) {
        all_u.push_back(p);
        all_v.push_back(q);
    }
    GeodesicEngine eu = engine_for(U, all_u), ev = engine_for(V, all_v);

    auto lookup_forward = [&](const BoundaryPoint& p) -> std::optional<BoundaryPoint> {
        if (!f.is_explicit()) return apply_forward(V, f, p);
        for (const auto& [a, b] : pool)
            if (a.ref == p.ref && distance(a.xy, p.xy) == 0) return b;
        return std::nullopt;
    };
    auto lookup_inverse = [&](const BoundaryPoint& q) -> std::optional<BoundaryPoint> {
        if (!f.is_explicit()) return apply_inverse(U, f, q);
        for (const auto& [a, b] : pool)
            if (b.ref == q.ref && distance(b.xy, q.xy) == 0) return a;
        return std::nullopt;
    };

    const bool has_inverse = f.is_explicit() || !f.forward || static_cast<bool>(f.inverse);
    std::vector<LocalOutcome> fwd(plan.size()), bwd(plan.size());
    parallel_for(plan.size(), [&](std::size_t k) {
        const Anchor& a = plan[k];
        fwd[k] = local_defect(eu, ev, neighbours_u(a), pool[a.idx].first, epsilon, lookup_forward);
        if (has_inverse) bwd[k] = local_defect(ev, eu, neighbours_v(a), pool[a.idx].second, epsilon, lookup_inverse);
    });
    for (std::size_t k = 0; k < plan.size(); ++k) {
        rep.max_defect = std::max(rep.max_defect, fwd[k].defect);
        rep.inverse_defect = std::max(rep.inverse_defect, bwd[k].defect);
        rep.pair_count += fwd[k].pairs + bwd[k].pairs;
    }
    if (!has_inverse) rep.note += "; inverse map unavailable, inverse check skipped";
    RigidSearch rs = find_rigid_motion(U, V, f, seed);
    rep.rigid_motion = rs.motion;
    rep.rigid_residual = rs.residual;
    return rep;
}

double default_local_epsilon(const PlanarDomain& d) {
    double shortest = kInf;
    for (const auto& l : d.loops)
        for (const auto& e : l.edges) shortest = std::min(shortest, e.length());
    for (const auto& s : d.slits)
        for (std::size_t i = 0; i + 1 < s.size(); ++i) shortest = std::min(shortest, distance(s[i], s[i + 1]));
    if (!std::isfinite(shortest)) shortest = scale_of(d);
    return shortest / 20.0;
}

std::optional<double> uniform_local_epsilon(const PlanarDomain& U, const PlanarDomain& V,
                                            const BoundaryCorrespondence& f, double tol, int anchors,
                                            std::uint64_t seed) {
    double eps = default_local_epsilon(U) * 20.0;
    for (int k = 0; k <= 20; ++k, eps *= 0.5) {
        auto r = check_local_isometry(U, V, f, eps, anchors, seed);
        if (r.max_defect <= tol && r.inverse_defect <= tol) return eps;
    }
    return std::nullopt;
}

RigidMotion2 fit_rigid(const std::vector<Point2>& from, const std::vector<Point2>& to, bool reflect) {
    if (from.size() != to.size() || from.empty()) throw std::invalid_argument("fit_rigid: mismatched samples");
    auto S = [&](const Point2& p) { return reflect ? Point2{p.x, -p.y} : p; };
    Point2 cp{0, 0}, cq{0, 0};
    for (std::size_t i = 0; i < from.size(); ++i) {
        cp = cp + S(from[i]);
        cq = cq + to[i];
    }
    cp = cp / static_cast<double>(from.size());
    cq = cq / static_cast<double>(to.size());
    double sc = 0, ss = 0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        Point2 a = S(from[i]) - cp, b = to[i] - cq;
        sc += dot(a, b);
        ss += cross(a, b);
    }
    RigidMotion2 m;
    m.reflect = reflect;
    m.angle = std::atan2(ss, sc);
    Point2 rc{std::cos(m.angle) * cp.x - std::sin(m.angle) * cp.y, std::sin(m.angle) * cp.x + std::cos(m.angle) * cp.y};
    m.translation = cq - rc;
    return m;
}

RigidSearch find_rigid_motion(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f,
                              std::uint64_t seed) {
    RigidSearch out;
    auto pool = sample_correspondence(U, V, f, seed);
    out.sample_count = static_cast<int>(pool.size());
    if (pool.empty()) throw std::invalid_argument("find_rigid_motion: no samples");
    std::vector<Point2> from, to;
    for (const auto& [a, b] : pool) {
        from.push_back(a.xy);
        to.push_back(b.xy);
    }
    // Degenerate when the sample spread has (numerically) rank <= 1.
    {
        Point2 c{0, 0};
        for (const auto& p : from) c = c + p;
        c = c / static_cast<double>(from.size());
        double sxx = 0, syy = 0, sxy = 0;
        for (const auto& p : from) {
            sxx += (p.x - c.x) * (p.x - c.x);
            syy += (p.y - c.y) * (p.y - c.y);
            sxy += (p.x - c.x) * (p.y - c.y);
        }
        double tr = sxx + syy, det = sxx * syy - sxy * sxy;
        out.degenerate_sample = !(det > 1e-12 * tr * tr);
    }
    double best = kInf;
    for (bool refl : {false, true}) {
        RigidMotion2 m = fit_rigid(from, to, refl);
        double r = 0;
        for (std::size_t i = 0; i < from.size(); ++i) r = std::max(r, distance(m.apply(from[i]), to[i]));
        if (r < best) {
            best = r;
            out.best = m;
        }
    }
    out.residual = best;
    const double tol = U.tol.eps_metric * std::max(scale_of(U), scale_of(V));
    RigidMotion2 inv = out.best.inverse();
    double h = 0;
    bool same_side = true;
    for (const auto& [a, b] : pool) {
        h = std::max(h, boundary_distance(V, out.best.apply(a.xy)));
        h = std::max(h, boundary_distance(U, inv.apply(b.xy)));
        same_side = same_side && dot(out.best.apply_vector(a.inward), b.inward) > 0;
    }
    out.hausdorff = h;
    if (out.residual <= tol && out.hausdorff <= tol && same_side) out.motion = out.best;
    return out;
}

WitnessReport verify_witness_II(const PlanarDomain& U, const PlanarDomain& V, const std::vector<RigidMotion2>& Q,
                                const std::function<Point2(const Point2&)>& theta) {
    WitnessReport rep;
    FuDecomposition fu = decompose_Fu(U), fv = decompose_Fu(V);
    if (fu.U_components.size() != fv.U_components.size() || fu.U_components.size() != Q.size() ||
        fu.F_components != fv.F_components) {
        rep.diagnostics.push_back("component count mismatch: U has " + std::to_string(fu.U_components.size()) +
                                  " inner components and " + std::to_string(fu.F_components) + " F components, V has " +
                                  std::to_string(fv.U_components.size()) + " and " + std::to_string(fv.F_components) +
                                  ", " + std::to_string(Q.size()) + " motions given");
        return rep;
    }
    rep.component_match = true;
    const double eps = U.tol.eps_metric;
    const double tol = eps * std::max(scale_of(U), scale_of(V));

    // (IIa) Q_i(U_i) = V_j for a bijective pairing i -> j.
    std::vector<int> partner(Q.size(), -1);
    rep.IIa = true;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        BPoly img = to_bpoly(fu.U_components[i], &Q[i]);
        double perim = bg::perimeter(img);
        double best = kInf;
        for (std::size_t j = 0; j < fv.U_components.size(); ++j) {
            BMulti diff;
            bg::sym_difference(img, to_bpoly(fv.U_components[j]), diff);
            double a = bg::area(diff);
            if (a < best) {
                best = a;
                partner[i] = static_cast<int>(j);
            }
        }
        double ratio = best / (eps * perim);
        rep.IIa_worst_ratio = std::max(rep.IIa_worst_ratio, ratio);
        if (ratio > 1.0) {
            rep.IIa = false;
            rep.diagnostics.push_back("IIa: component " + std::to_string(i) + " symmetric difference " + std::to_string(best));
        }
    }
    {
        auto sorted = partner;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            rep.IIa = false;
            rep.diagnostics.push_back("IIa: two components map onto the same V component");
        }
    }

    // (IIb) membership equivalence on sampled points of dU_i, and theta = Q_i there.
    DomainProbe pu(U), pv(V);
    auto on_box = [](const Point2& p, double R) {
        return std::abs(std::abs(p.x) - R) <= 1e-9 * R || std::abs(std::abs(p.y) - R) <= 1e-9 * R;
    };
    auto on_rings = [&](const Point2& p, const std::vector<std::vector<Point2>>& rings) {
        for (const auto& r : rings)
            if (ring_distance(p, r) <= tol) return true;
        return false;
    };
    rep.IIb = true;
    for (std::size_t i = 0; i < Q.size() && partner[i] >= 0; ++i) {
        const auto& Vj = fv.U_components[partner[i]];
        for (const auto& ring : fu.U_components[i])
            for (std::size_t k = 0; k < ring.size(); ++k)
                for (int s = 0; s < 8; ++s) {
                    Point2 x = ring[k] + (ring[(k + 1) % ring.size()] - ring[k]) * (s / 8.0);
                    if (on_box(x, fu.box_half_width)) continue;
                    Point2 y = Q[i].apply(x);
                    bool lhs = pu.in_open(x);
                    bool rhs = pv.in_open(y) && on_rings(y, Vj);
                    ++rep.IIb_checked;
                    if (lhs != rhs) {
                        rep.IIb = false;
                        rep.diagnostics.push_back("IIb: membership differs at (" + std::to_string(x.x) + ", " + std::to_string(x.y) + ")");
                    } else if (lhs && distance(theta(x), y) > tol) {
                        rep.IIb = false;
                        rep.diagnostics.push_back("IIb: theta differs from Q at (" + std::to_string(x.x) + ", " + std::to_string(x.y) + ")");
                    }
                }
    }

    // (IIc) arclength of sampled subarcs of dF_U equals that of their images.
    rep.IIc = true;
    for (const auto& poly : fu.F_U)
        for (const auto& ring : poly) {
            std::vector<Point2> chain;
            for (std::size_t k = 0; k < ring.size(); ++k) {
                const Point2& a = ring[k];
                const Point2& b = ring[(k + 1) % ring.size()];
                if (on_box(a, fu.box_half_width) && on_box(b, fu.box_half_width)) continue;
                for (int s = 0; s < 8; ++s) chain.push_back(a + (b - a) * (s / 8.0));
                chain.push_back(b);
            }
            for (std::size_t start = 0; start + 1 < chain.size(); start += 7) {
                double L = 0, Li = 0;
                for (std::size_t k = start; k + 1 < chain.size() && k < start + 24; ++k) {
                    if (distance(chain[k], chain[k + 1]) == 0) continue;
                    L += distance(chain[k], chain[k + 1]);
                    Li += distance(theta(chain[k]), theta(chain[k + 1]));
                }
                double e = std::abs(L - Li);
                rep.IIc_worst = std::max(rep.IIc_worst, e);
                if (e > eps * std::max(1.0, L)) rep.IIc = false;
            }
        }
    if (!rep.IIc) rep.diagnostics.push_back("IIc: theta changes arclength by " + std::to_string(rep.IIc_worst));
    rep.passed = rep.component_match && rep.IIa && rep.IIb && rep.IIc;
    return rep;
}

nlohmann::json to_json(const Classification& c) {
    return {{"verdict", to_string(c.verdict)}, {"rule", c.rule}, {"evidence", c.evidence}};
}

nlohmann::json to_json(const RigidMotion2& m) {
    return {{"angle", m.angle}, {"translation", json_point(m.translation)}, {"reflect", m.reflect}};
}

nlohmann::json to_json(const IsometryReport& r) {
    nlohmann::json j{{"kind", r.kind},
                     {"max_defect", r.max_defect},
                     {"pair_count", r.pair_count},
                     {"rigid_residual", r.rigid_residual},
                     {"note", r.note}};
    if (r.kind == "local") {
        j["epsilon_used"] = r.epsilon_used;
        j["inverse_defect"] = r.inverse_defect;
    }
    j["rigid_motion"] = r.rigid_motion ? to_json(*r.rigid_motion) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const RigidSearch& r) {
    return {{"motion", r.motion ? to_json(*r.motion) : nlohmann::json(nullptr)},
            {"best", to_json(r.best)},
            {"residual", r.residual},
            {"hausdorff", r.hausdorff},
            {"degenerate_sample", r.degenerate_sample},
            {"sample_count", r.sample_count}};
}

nlohmann::json to_json(const WitnessReport& r) {
    return {{"passed", r.passed},       {"component_match", r.component_match}, {"IIa", r.IIa},
            {"IIb", r.IIb},             {"IIc", r.IIc},                         {"IIa_worst_ratio", r.IIa_worst_ratio},
            {"IIc_worst", r.IIc_worst}, {"IIb_checked", r.IIb_checked},         {"diagnostics", r.diagnostics}};
}

}  // namespace relmetric
