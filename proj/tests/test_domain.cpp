#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "relmetric/domain.hpp"

using namespace relmetric;

namespace {

const char* kSquareDoc = R"({
  "kind": "bounded",
  "loops": [ { "edges": [
    {"type":"seg","a":[0,0],"b":[1,0]},
    {"type":"seg","a":[1,0],"b":[1,1]},
    {"type":"seg","a":[1,1],"b":[0,1]},
    {"type":"seg","a":[0,1],"b":[0,0]} ] } ],
  "tolerance": {"eps_geom":1e-12,"eps_flat":1e-6,"eps_metric":1e-9}
})";

}  // namespace

TEST_CASE("load unit square") {
    auto d = load_domain(kSquareDoc);
    CHECK(d.kind == DomainKind::bounded);
    REQUIRE(d.loops.size() == 1);
    CHECK(d.loops[0].length() == doctest::Approx(4.0));
}

TEST_CASE("loader accepts exponent notation") {
    std::string doc = R"({"kind":"bounded","loops":[{"edges":[
      {"type":"seg","a":[0e0,0],"b":[1.0E+0,0]},
      {"type":"seg","a":[1,0],"b":[1,10e-1]},
      {"type":"seg","a":[1,1],"b":[0,1]},
      {"type":"seg","a":[0,1],"b":[0,0]}]}]})";
    auto d = load_domain(doc);
    CHECK(d.loops[0].length() == doctest::Approx(4.0));
}

TEST_CASE("nested counter-clockwise loops are rejected as hole orientation") {
    std::string doc = R"({"kind":"bounded","loops":[
      {"edges":[{"type":"seg","a":[0,0],"b":[4,0]},{"type":"seg","a":[4,0],"b":[4,4]},
                {"type":"seg","a":[4,4],"b":[0,4]},{"type":"seg","a":[0,4],"b":[0,0]}]},
      {"edges":[{"type":"seg","a":[1,1],"b":[2,1]},{"type":"seg","a":[2,1],"b":[2,2]},
                {"type":"seg","a":[2,2],"b":[1,2]},{"type":"seg","a":[1,2],"b":[1,1]}]}]})";
    try {
        load_domain(doc);
        FAIL("expected a DomainError");
    } catch (const DomainError& e) {
        bool found = false;
        for (const auto& p : e.problems()) found = found || p.find("hole orientation") != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("loader reports every violated invariant") {
    std::string doc = R"({"kind":"bounded","loops":[
      {"edges":[{"type":"seg","a":[0,0],"b":[0,4]},{"type":"seg","a":[0,4],"b":[4,4]},
                {"type":"seg","a":[4,4],"b":[4,0]},{"type":"seg","a":[4,0],"b":[0,0]}]},
      {"edges":[{"type":"seg","a":[10,10],"b":[11,10]},{"type":"seg","a":[11,10],"b":[11,11]},
                {"type":"seg","a":[11,11],"b":[10,11]},{"type":"seg","a":[10,11],"b":[10,10]}]}]})";
    try {
        load_domain(doc);
        FAIL("expected a DomainError");
    } catch (const DomainError& e) {
        CHECK(e.problems().size() >= 3);  // outer orientation, hole orientation, hole outside
    }
}

TEST_CASE("self-intersecting loop and schema errors") {
    std::string bow = R"({"kind":"bounded","loops":[{"edges":[
      {"type":"seg","a":[0,0],"b":[1,1]},{"type":"seg","a":[1,1],"b":[1,0]},
      {"type":"seg","a":[1,0],"b":[0,1]},{"type":"seg","a":[0,1],"b":[0,0]}]}]})";
    CHECK_THROWS_AS(load_domain(bow), DomainError);
    CHECK_THROWS_AS(load_domain("{\"kind\":\"weird\"}"), DomainError);
    CHECK_THROWS_AS(load_domain("not json"), DomainError);
}

TEST_CASE("complement of a segment") {
    std::string doc = R"({"kind":"complement","loops":[],"slits":[[[0,0],[1,0]]]})";
    auto d = load_domain(doc);
    CHECK(d.kind == DomainKind::complement);
    auto g = diagnose(d);
    CHECK(g.boundary_collinear);
    CHECK(g.boundary_components == 1);
    CHECK(boundary_length(d, BoundaryRef::parse("slit0")) == doctest::Approx(2.0));
    auto top = boundary_point_at(d, BoundaryRef::parse("slit0"), 0.5);
    auto bottom = boundary_point_at(d, BoundaryRef::parse("slit0"), 1.5);
    CHECK(distance(top.xy, bottom.xy) < 1e-15);
    CHECK(dot(top.inward, bottom.inward) == doctest::Approx(-1.0));
}

TEST_CASE("diagnose fixtures") {
    auto sq = diagnose(fixtures::unit_square());
    CHECK(sq.is_convex);
    CHECK_FALSE(sq.is_strictly_convex_flag);
    CHECK(sq.is_bounded);
    auto c = diagnose(fixtures::circle());
    CHECK(c.is_convex);
    CHECK(c.is_strictly_convex_flag);
    auto l = diagnose(fixtures::l_polygon());
    CHECK_FALSE(l.is_convex);
    auto hp = diagnose(fixtures::halfplane_below());
    CHECK(hp.is_halfplane);
    CHECK(hp.boundary_collinear);
    CHECK_FALSE(hp.is_bounded);
    auto q = diagnose(fixtures::quadrant());
    CHECK(q.is_convex);
    CHECK_FALSE(q.is_halfplane);
    CHECK_FALSE(q.boundary_collinear);
    CHECK(q.boundary_components == 1);
    auto pt = diagnose(fixtures::complement_of_point());
    CHECK(pt.boundary_collinear);
    CHECK(pt.boundary_single_point);
    auto st = diagnose(fixtures::strip_complement());
    CHECK_FALSE(st.boundary_collinear);
    CHECK(st.boundary_components == 4);
}

TEST_CASE("diagnostics invariants: strict implies convex, collinear excludes strict") {
    std::vector<PlanarDomain> all{fixtures::unit_square(), fixtures::circle(), fixtures::l_polygon(),
                                  fixtures::halfplane_below(), fixtures::quadrant(), fixtures::complement_of_segment()};
    for (const auto& d : all) {
        auto g = diagnose(d);
        if (g.is_strictly_convex_flag) CHECK(g.is_convex);
        if (g.boundary_collinear) CHECK_FALSE(g.is_strictly_convex_flag);
    }
}

TEST_CASE("convexity matches the brute-force orientation oracle") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        auto pts = fixtures::random_simple(rng, 3 + t % 9);
        if (pts.size() < 3 || polygon_signed_area(pts) <= 0) continue;
        auto d = make_polygon_domain(pts);
        try {
            validate_domain(d);
        } catch (const DomainError&) {
            continue;
        }
        bool oracle = true;
        const std::size_t n = pts.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    // Every CCW-ordered vertex triple must be non-right.
                    if (i < j && j < k && orient2d_sign(pts[i], pts[j], pts[k]) < 0) oracle = false;
                }
        CHECK(diagnose(d).is_convex == oracle);
    }
}

TEST_CASE("boundary_point_at on the unit square") {
    auto d = fixtures::unit_square();
    BoundaryRef L0{BoundaryRef::Kind::loop, 0};
    CHECK(boundary_point_at(d, L0, 0).xy == Point2{0, 0});
    CHECK(distance(boundary_point_at(d, L0, 4).xy, Point2{0, 0}) <= 1e-12);
    auto m = boundary_point_at(d, L0, 1.5);
    CHECK(m.xy.x == doctest::Approx(1.0));
    CHECK(m.xy.y == doctest::Approx(0.5));
    CHECK(m.inward.x == doctest::Approx(-1.0));
    CHECK_THROWS_AS(boundary_point_at(d, BoundaryRef{BoundaryRef::Kind::loop, 3}, 0), std::out_of_range);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-10, 10);
    for (int i = 0; i < 100; ++i) {
        double s = U(rng);
        CHECK(distance(boundary_point_at(d, L0, s).xy, boundary_point_at(d, L0, s + 4.0).xy) <= 1e-12);
    }
}

TEST_CASE("serialization round-trips coordinates bit for bit") {
    std::mt19937_64 rng(9);
    auto pts = fixtures::random_convex(rng, 30);
    auto d = make_polygon_domain(pts);
    d.singular_vertices.push_back(pts[0]);
    auto back = load_domain(serialize_domain(d));
    REQUIRE(back.loops[0].edges.size() == d.loops[0].edges.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back.loops[0].edges[i].seg.a.x == d.loops[0].edges[i].seg.a.x);
        CHECK(back.loops[0].edges[i].seg.a.y == d.loops[0].edges[i].seg.a.y);
    }
    CHECK(back.singular_vertices[0] == pts[0]);
    auto c = fixtures::circle({0.1, 0.2}, 0.7);
    auto cb = load_domain(serialize_domain(c));
    CHECK(cb.loops[0].edges[0].arc.radius == 0.7);
    auto st = load_domain(serialize_domain(fixtures::strip_complement()));
    CHECK(st.lines.size() == 2);
}
