#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "relmetric/counterexamples.hpp"

using namespace relmetric;

namespace {

bool has_segment(const PlanarDomain& d, const Point2& a, const Point2& b) {
    for (const auto& l : d.loops)
        for (const auto& e : l.edges) {
            Point2 u = e.start(), v = e.end();
            if ((distance(u, a) < 1e-15 && distance(v, b) < 1e-15) || (distance(u, b) < 1e-15 && distance(v, a) < 1e-15))
                return true;
        }
    return false;
}

Point3 rand3(std::mt19937_64& g, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(g), u(g), u(g)};
}

}  // namespace

TEST_CASE("comb segments at small depth") {
    auto c1 = gen_comb(1);
    CHECK(has_segment(c1.domain, {1.0, 1.0}, {0.5, 0.0}));
    CHECK(has_segment(c1.domain, {1.0, 1.0}, {1.0, 2.0}));
    auto c2 = gen_comb(2);
    CHECK(has_segment(c2.domain, {0.5, 0.5}, {0.5, 0.0}));
    for (int n : {1, 2, 5}) {
        auto c = gen_comb(n);
        REQUIRE(c.domain.singular_vertices.size() == 1);
        CHECK(c.domain.singular_vertices[0] == Point2{0.0, 0.0});
        CHECK_NOTHROW(validate_domain(c.domain));
    }
    CHECK_THROWS_AS(gen_comb(0), std::invalid_argument);
}

TEST_CASE("comb probe diverges, convexified probe converges") {
    auto p = comb_divergence_probe(2, 6);
    CHECK(p.strictly_increasing);
    CHECK(p.min_difference >= 0.05);
    auto c = convexified_probe(2, 12);
    CHECK(std::abs(c.distance.back() - std::sqrt(5.0)) <= 1e-3);
    CHECK(std::abs(c.difference.back()) <= 1e-3);
}

TEST_CASE("obstacle triangle construction") {
    CHECK(level_count(1) == 6);
    CHECK(level_count(2) == 39);
    CHECK(level_count(3) == 248);
    auto t = gen_obstacle_triangle(3);
    REQUIRE(t.counts == std::vector<int>{6, 39, 248});
    CHECK(t.segments.size() == 293u);
    for (const auto& s : t.segments) {
        if (s.level == 1) {
            CHECK(norm(s.x) == doctest::Approx(0.5).epsilon(1e-15));
            CHECK(norm(s.y) == doctest::Approx(5.5).epsilon(1e-15));
        }
        CHECK(std::abs(cross(s.x, s.y)) <= 1e-15);
        CHECK(s.angle > 0.0);
        CHECK(s.angle < kPi / 6);
    }
    CHECK_FALSE(first_intersecting_pair(t).has_value());
    CHECK(std::abs(distance(t.D, t.O) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(gen_obstacle_triangle(6), std::invalid_argument);
    CHECK_THROWS_AS(gen_obstacle_triangle(-1), std::invalid_argument);
}

TEST_CASE("avoiding path: empty scene is the chord") {
    auto p = shortest_avoiding_path(gen_obstacle_triangle(0), 1.0 / 16);
    REQUIRE(p.reachable);
    CHECK(p.length == doctest::Approx(2.0 * std::sin(kPi / 12)).epsilon(1e-12));
}

TEST_CASE("avoiding path is monotone in depth and radius") {
    double prev = 0.0;
    for (int J = 0; J <= 2; ++J) {
        auto p = shortest_avoiding_path(gen_obstacle_triangle(J), 1.0 / 16);
        REQUIRE(p.reachable);
        CHECK(p.length >= prev - 1e-12);
        prev = p.length;
    }
    auto t = gen_obstacle_triangle(2);
    double last = 0.0;
    for (double r : {1.0 / 16, 0.2, 0.4}) {
        auto p = shortest_avoiding_path(t, r);
        REQUIRE(p.reachable);
        CHECK(p.length >= last - 1e-12);
        last = p.length;
    }
    auto blocked = shortest_avoiding_path(t, 1.5);
    CHECK_FALSE(blocked.reachable);
    CHECK_FALSE(blocked.note.empty());
}

TEST_CASE("avoiding path never crosses an obstacle") {
    auto t = gen_obstacle_triangle(2);
    auto p = shortest_avoiding_path(t, 1.0 / 16);
    REQUIRE(p.reachable);
    const auto& v = p.path.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        for (const auto& s : t.segments) CHECK_FALSE(segments_cross_properly(v[i], v[i + 1], s.x, s.y, 1e-12));
}

TEST_CASE("bend pair map") {
    const double l = 1.0;
    auto b = gen_bend_pair(l);
    CHECK(b.radius == doctest::Approx(2.0 * l / kPi));
    CHECK(b.radius * kPi / 2 == doctest::Approx(l).epsilon(1e-15));
    CHECK(distance(b.map(0.0), Point2{0.0, 0.0}) <= 1e-15);
    CHECK(distance(b.map(-l), b.P) <= 1e-14);
    CHECK(distance(b.map(0.7), Point2{0.7, 0.0}) <= 1e-15);
    // Arclength of the image by fine polylines.
    for (auto [x0, x1] : {std::pair{-0.9, -0.1}, std::pair{-1.5, 0.3}, std::pair{-3.0, -1.2}}) {
        const int n = 20000;
        double len = 0;
        for (int i = 0; i < n; ++i)
            len += distance(b.map(x0 + (x1 - x0) * i / n), b.map(x0 + (x1 - x0) * (i + 1) / n));
        CHECK(len == doctest::Approx(x1 - x0).epsilon(1e-8));
    }
    for (double x : {-3.0, -1.0, -0.5, -1e-3, 0.0, 2.0}) CHECK(std::abs(b.inverse_map(b.map(x)) - x) <= 1e-12);
    CHECK_THROWS_AS(gen_bend_pair(0.0), std::invalid_argument);
}

TEST_CASE("bend pair is locally isometric and not congruent") {
    auto b = gen_bend_pair(1.0);
    auto rep = check_local_isometry(b.U, b.V, b.correspondence, 0.1, 150, 11);
    CHECK(rep.max_defect <= 1e-6);
    auto rs = find_rigid_motion(b.U, b.V, b.correspondence, 11);
    CHECK_FALSE(rs.motion.has_value());
    CHECK(rs.residual >= 0.1);
}

TEST_CASE("cardioid solid") {
    auto c = gen_cardioid_solid(32);
    auto rep = inspect_mesh(c.mesh);
    CHECK(rep.closed);
    CHECK(rep.edge_manifold);
    CHECK(rep.oriented);
    CHECK(rep.degenerate_faces == 0);
    CHECK(rep.euler_characteristic == 2);
    Point2 s = c.profile[c.splice_index];
    CHECK(s.x == doctest::Approx(std::sqrt(5.0) / 9));
    CHECK(s.x * s.x + s.y * s.y == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK(s.y == doctest::Approx(1.0 - std::sqrt(2.0 / 3 - s.x * s.x)).epsilon(1e-14));
    CHECK(std::abs(cardioid_residual(s)) <= 1e-14);
    for (std::size_t i = c.splice_index; i < c.profile.size(); ++i) CHECK(std::abs(cardioid_residual(c.profile[i])) <= 1e-12);
    CHECK_THROWS_AS(gen_cardioid_solid(15), std::invalid_argument);
}

TEST_CASE("triangle intersection against edge oracle") {
    std::mt19937_64 g(5);
    int agree = 0, hits = 0;
    for (int it = 0; it < 3000; ++it) {
        std::array<Point3, 3> a{rand3(g, 0, 1), rand3(g, 0, 1), rand3(g, 0, 1)};
        std::array<Point3, 3> b{rand3(g, 0, 1), rand3(g, 0, 1), rand3(g, 0, 1)};
        bool ref = false;
        for (int k = 0; k < 3; ++k) {
            ref = ref || oracles::segment_triangle(a[k], a[(k + 1) % 3], b[0], b[1], b[2]);
            ref = ref || oracles::segment_triangle(b[k], b[(k + 1) % 3], a[0], a[1], a[2]);
        }
        hits += ref;
        agree += (triangles_intersect(a, b) == ref);
    }
    CHECK(agree == 3000);
    CHECK(hits > 100);
}

TEST_CASE("segment against strip agrees with its mesh") {
    SpiralStrip s;
    s.c = 1.0;
    s.rho0 = 0.5;
    s.coils = 4;
    s.shrink = 0.4;
    s.eps = s.shrink * s.rho0 / (2 * kPi * s.coils);
    const int S = 8;
    Mesh m = strip_mesh(s, S);
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> ux(0.0, 13.0), uy(-6.0, 6.0);
    int hits = 0;
    for (int it = 0; it < 4000; ++it) {
        Point3 p{ux(g), uy(g), uy(g)}, q{ux(g), uy(g), uy(g)};
        if (it % 2) q = p + (q - p) * 0.15;
        bool ref = false;
        for (const auto& f : m.faces)
            if (oracles::segment_triangle(p, q, m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]])) {
                ref = true;
                break;
            }
        hits += ref;
        CHECK(segment_hits_strip(s, S, p, q) == ref);
    }
    CHECK(hits > 200);
}

TEST_CASE("labyrinth agrees with the general engine") {
    SpiralStrip s;
    s.c = 1.0;
    s.rho0 = 1.0;
    for (double shrink : {0.1, 0.5, 0.9})
        for (int M : {2, 3, 5})
            for (int S : {8, 16}) {
                s.coils = M;
                s.shrink = shrink;
                s.eps = shrink * s.rho0 / (2 * kPi * M);
                auto fast = labyrinth_check(s, S);
                auto ref = labyrinth_check_reference(s, S);
                CHECK(fast.length == doctest::Approx(ref.length).epsilon(1e-3));
                CHECK(fast.length <= fast.inner_wall_length + 1e-12);
                CHECK(fast.path.size() >= 2u);
            }
}

TEST_CASE("spiral scene at depth 1") {
    auto sc = gen_spiral_scene(1);
    REQUIRE(sc.strips.size() == 6u);
    int M = sc.coils[0];
    CHECK((M & (M - 1)) == 0);
    for (const auto& s : sc.strips) {
        auto lab = labyrinth_check(s, sc.samples_per_coil);
        CHECK(lab.passed);
        CHECK(lab.length >= 10.0);
    }
    auto rep = check_strips_disjoint(sc);
    CHECK(rep.band_certificate);
    CHECK(rep.triangle_test_run);
    CHECK(rep.triangle_disjoint);
    CHECK_FALSE(rep.first_colliding.has_value());
    CHECK(probe_segments_clear(sc));
    for (const auto& s : sc.strips) {
        auto mr = inspect_mesh(strip_mesh(s, sc.samples_per_coil));
        CHECK(mr.edge_manifold);
        CHECK(mr.degenerate_faces == 0);
        CHECK(mr.euler_characteristic == 1);
    }
}

TEST_CASE("spiral scene errors") {
    CHECK_THROWS_AS(gen_spiral_scene(3), std::invalid_argument);
    CHECK_THROWS_AS(gen_spiral_scene(0), std::invalid_argument);
    SpiralOptions wide;
    wide.coils = {8};
    wide.shrink = {0.9};
    CHECK_THROWS_AS(gen_spiral_scene(1, wide), std::invalid_argument);
}

TEST_CASE("3d lattice estimates") {
    auto sc = gen_spiral_scene(1);
    auto g = estimate_3d_level(sc, 1, {});
    REQUIRE(g.connected);
    CHECK(g.d_AO <= 1.05);
    CHECK(g.d_OD <= 1.05);
    CHECK(g.d_AD >= 2.3);
    Geodesic3DOptions free;
    free.with_strips = false;
    auto f = estimate_3d_level(sc, 1, free);
    CHECK(f.d_AD >= 2.0 * std::sin(kPi / 12) - 1e-12);
    CHECK(f.d_AD <= 2.0 * std::sin(kPi / 12) * 1.02);
}

TEST_CASE("obj export") {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}};
    std::string obj = mesh_to_obj({m, m}, {"a", "b"});
    std::istringstream in(obj);
    std::string line;
    int v = 0, f = 0;
    std::string last_face;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("f ", 0) == 0) {
            ++f;
            last_face = line;
        }
    }
    CHECK(v == 6);
    CHECK(f == 2);
    CHECK(last_face == "f 4 5 6");
}
