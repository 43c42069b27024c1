#include <doctest.h>

#include <functional>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "relmetric/boundary_struct.hpp"

using namespace relmetric;

namespace {

const std::vector<Point2> kL{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};

bool sampled_interval(const std::vector<Point2>& ring, const Point2& a, const Point2& b) {
    // Samples miss exact vertex touches, so those are tested directly.
    for (const auto& v : ring)
        if (distance(v, a) > 1e-12 && distance(v, b) > 1e-12 && point_segment_distance(v, a, b) <= 1e-12) return false;
    for (int i = 1; i <= 100; ++i) {
        Point2 p = a + (b - a) * (i / 101.0);
        if (!oracles::in_ring_closed(p, ring, 0)) return false;
        for (std::size_t k = 0; k < ring.size(); ++k)
            if (point_segment_distance(p, ring[k], ring[(k + 1) % ring.size()]) <= 1e-12) return false;
    }
    return true;
}

// 4-connected flood fill over a raster membership mask; returns (component count, area).
std::pair<int, double> raster_components(double R, int n, const std::function<bool(const Point2&)>& inside) {
    const double h = 2 * R / n;
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(j) * n + i] = inside({-R + h * (i + 0.5), -R + h * (j + 0.5)});
    int comps = 0;
    double area = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (m[s] != 1) continue;
        ++comps;
        m[s] = 2;
        stack.push_back(s);
        while (!stack.empty()) {
            std::size_t c = stack.back();
            stack.pop_back();
            area += h * h;
            int i = static_cast<int>(c % n), j = static_cast<int>(c / n);
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int a = i + di[k], b = j + dj[k];
                if (a < 0 || b < 0 || a >= n || b >= n) continue;
                std::size_t q = static_cast<std::size_t>(b) * n + a;
                if (m[q] == 1) {
                    m[q] = 2;
                    stack.push_back(q);
                }
            }
        }
    }
    return {comps, area};
}

}  // namespace

TEST_CASE("boundary intervals on the L-polygon match the sampling oracle") {
    auto d = fixtures::l_polygon();
    CHECK_FALSE(is_boundary_interval(d, {2, 1}, {1, 2}));
    CHECK_FALSE(is_boundary_interval(d, {2, 0}, {0, 2}));
    CHECK(is_boundary_interval(fixtures::unit_square(), {0, 0}, {1, 1}));
    for (std::size_t i = 0; i < kL.size(); ++i)
        for (std::size_t j = i + 1; j < kL.size(); ++j)
            CHECK(is_boundary_interval(d, kL[i], kL[j]) == sampled_interval(kL, kL[i], kL[j]));
    auto all = enumerate_boundary_intervals(d);
    int expected = 0;
    for (std::size_t i = 0; i < kL.size(); ++i)
        for (std::size_t j = i + 1; j < kL.size(); ++j) expected += sampled_interval(kL, kL[i], kL[j]);
    CHECK(static_cast<int>(all.size()) == expected);
    for (const auto& iv : all) CHECK(is_boundary_interval(d, iv.x, iv.y));
}

TEST_CASE("convex polygons have exactly the diagonals as vertex intervals") {
    auto sq = enumerate_boundary_intervals(fixtures::unit_square());
    CHECK(sq.size() == 2);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        auto pts = fixtures::random_convex(rng, 12);
        auto d = make_polygon_domain(pts);
        const std::size_t n = pts.size();
        auto iv = enumerate_boundary_intervals(d);
        CHECK(iv.size() == n * (n - 3) / 2);
        for (const auto& i : iv) CHECK(i.maximal);
    }
}

TEST_CASE("interval through a reflex vertex is not maximal") {
    auto d = fixtures::l_polygon();
    DomainProbe probe(d);
    auto iv = enumerate_boundary_intervals(probe, {{1.5, 0}, {1, 1}, {0, 2}, {2, 0.5}, {0.5, 2}});
    bool seen = false;
    for (const auto& i : iv)
        if ((distance(i.x, {2, 0.5}) < 1e-12 && distance(i.y, {1, 1}) < 1e-12) ||
            (distance(i.y, {2, 0.5}) < 1e-12 && distance(i.x, {1, 1}) < 1e-12)) {
            seen = true;
            CHECK_FALSE(i.maximal);
        }
    CHECK(seen);
}

TEST_CASE("boundary angles") {
    auto sq = fixtures::unit_square();
    CHECK_FALSE(detect_boundary_angle(sq, {1, 0}, {0, 0}, {0, 1}).has_value());
    CHECK_FALSE(detect_boundary_angle(sq, {1, 0}, {0, 1}, {1, 1}).has_value());
    auto pent = fixtures::pentagon_notch();
    auto ang = detect_boundary_angle(pent, {0, 0}, {2, 2}, {4, 0});
    REQUIRE(ang.has_value());
    CHECK(ang->radius_witness > 0);
    // Clearance oracle: minimum distance from dense wedge samples to the boundary ring.
    std::vector<Point2> ring{{0, 0}, {4, 0}, {4, 4}, {2, 2}, {0, 4}};
    double r = ang->radius_witness;
    for (int i = 1; i <= 50; ++i)
        for (int j = 0; j <= 50; ++j) {
            double th = -3 * kPi / 4 + (kPi / 2) * j / 50.0;
            Point2 p = Point2{2, 2} + Point2{std::cos(th), std::sin(th)} * (r * i / 50.0);
            CHECK(ring_distance(p, ring) > 0);
            CHECK(oracles::in_ring_closed(p, ring, 0));
        }
}

TEST_CASE("gamma sets contain the legs") {
    auto pent = fixtures::pentagon_notch();
    auto ang = detect_boundary_angle(pent, {0, 0}, {2, 2}, {4, 0});
    REQUIRE(ang.has_value());
    auto g = gamma_set(pent, *ang, {{0, 0}, {4, 0}, {4, 4}, {2, 2}, {0, 4}});
    auto has = [&](Point2 p) {
        for (const auto& m : g.members)
            if (distance(m, p) < 1e-12) return true;
        return false;
    };
    CHECK(has({0, 0}));
    CHECK(has({4, 0}));
    const std::vector<Point2> ring{{0, 0}, {4, 0}, {4, 4}, {2, 2}, {0, 4}};
    for (const auto& w : g.members)
        for (int i = 1; i <= 200; ++i) {
            Point2 p = ang->y + (w - ang->y) * (i / 201.0);
            CHECK(ring_distance(p, ring) > 0);
        }
    auto empty = gamma_set(pent, *ang, {});
    CHECK(empty.members.size() == 2);
}

TEST_CASE("gamma set of a convex polygon is exactly the legs") {
    std::mt19937_64 rng(11);
    int tested = 0;
    for (int t = 0; t < 20 && tested < 5; ++t) {
        auto pts = fixtures::random_convex(rng, 10);
        auto d = make_polygon_domain(pts);
        const std::size_t n = pts.size();
        for (std::size_t k = 0; k < n; ++k) {
            auto ang = detect_boundary_angle(d, pts[(k + 2) % n], pts[k], pts[(k + n - 2) % n]);
            if (!ang) continue;
            auto g = gamma_set(d, *ang, pts);
            CHECK(g.members.size() == 2);
            ++tested;
            break;
        }
    }
    CHECK(tested > 0);
}

TEST_CASE("F_U decomposition on fixtures") {
    auto fu = decompose_Fu(fixtures::l_polygon());
    CHECK(fu.F_components == 0);
    CHECK(fu.boundary_F_components == 0);

    auto sq = decompose_Fu(fixtures::complement_of_square());
    CHECK(sq.F_components == 1);
    CHECK(sq.boundary_F_components == 1);
    CHECK(sq.U_components.empty());
    auto rs = raster_components(sq.box_half_width, 2048, [](const Point2& p) { return !(p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1); });
    CHECK(rs.first == sq.F_components);
    CHECK(std::abs(rs.second - sq.F_area) <= 5e-3 * sq.F_area);

    auto st = decompose_Fu(fixtures::strip_complement());
    CHECK(st.F_components == 2);
    CHECK(st.boundary_F_components == 2);
    CHECK(st.U_components.size() == 1);
    auto rt = raster_components(st.box_half_width, 2048, [](const Point2& p) { return p.y < 0 || p.y > 1; });
    CHECK(rt.first == st.F_components);
    CHECK(std::abs(rt.second - st.F_area) <= 5e-3 * st.F_area);

    auto h = decompose_Fu(fixtures::complement_of_h());
    CHECK(h.F_components == 1);
    CHECK(h.U_components.size() == 2);

    auto q = decompose_Fu(fixtures::quadrant());
    CHECK(q.F_components == 0);
    auto hp = decompose_Fu(fixtures::halfplane_below());
    CHECK(hp.F_components == 1);
    CHECK(hp.boundary_F_components == 1);
    auto pt = decompose_Fu(fixtures::complement_of_point());
    CHECK(pt.F_components == 1);
}

TEST_CASE("bounded domains always have empty F_U") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        auto fu = decompose_Fu(make_polygon_domain(fixtures::random_simple(rng, 12)));
        CHECK(fu.F_components == 0);
        CHECK(fu.boundary_F_components == 0);
    }
}

TEST_CASE("interval equivalence classes match U_i membership") {
    for (const auto& d : {fixtures::complement_of_h(), fixtures::l_polygon(), fixtures::pentagon_notch()}) {
        auto fu = decompose_Fu(d);
        DomainProbe probe(d);
        auto iv = enumerate_boundary_intervals(probe, boundary_candidates(d, 1));
        std::vector<BoundaryInterval> maximal;
        for (const auto& i : iv)
            if (i.maximal) maximal.push_back(i);
        REQUIRE(!maximal.empty());
        auto cls = interval_equivalence_classes(probe, maximal);
        for (std::size_t i = 0; i < maximal.size(); ++i) {
            int ci = interval_component(fu, maximal[i]);
            CHECK(ci >= 0);
            for (std::size_t j = i + 1; j < maximal.size(); ++j) {
                int cj = interval_component(fu, maximal[j]);
                CHECK((cls[i] == cls[j]) == (ci == cj));
            }
        }
    }
}
