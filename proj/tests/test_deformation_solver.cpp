#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relmetric/deformation_solver.hpp"

using namespace relmetric;

namespace {

using K = std::array<double, 4>;

// Arclength of a piecewise quadratic graph from its pieces, closed form.
double closed_length(const std::vector<double>& br, const std::function<double(double)>& slope, double x) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < br.size() && br[i] < x; ++i) {
        double u = br[i], v = std::min(br[i + 1], x);
        if (v <= u) continue;
        double a = slope(u), b = slope(v);
        if (std::abs(b - a) < 1e-14)
            total += (v - u) * std::sqrt(1 + a * a);
        else
            total += (v - u) * (oracles::sqrt1pu2_antiderivative(b) - oracles::sqrt1pu2_antiderivative(a)) / (b - a);
    }
    return total;
}

}  // namespace

TEST_CASE("profile shape") {
    for (int stage : {1, 3, 6}) {
        auto p = build_profile(stage, 7);
        CHECK(p.f(0.0) == 0.0);
        CHECK(p.df(0.0) == 0.0);
        CHECK(p.c1_defect() <= 1e-12);
        CHECK(p.segments.size() == std::size_t(2 * (stage + 1)));
        double prev = -1.0;
        bool monotone = true;
        for (int i = 0; i <= 10000; ++i) {
            double d = p.df(p.a_star * i / 10000.0);
            if (d < prev) monotone = false;
            prev = d;
        }
        CHECK(monotone);
        for (auto& s : p.segments) {
            double m = (p.f(s[1]) - p.f(s[0])) / (s[1] - s[0]);
            CHECK(p.df(0.5 * (s[0] + s[1])) == doctest::Approx(m).epsilon(1e-12));
            // maximal: curvature on both sides
            CHECK(p.df(s[0] - 1e-6) < p.df(s[0]));
            CHECK(p.df(s[1] + 1e-6) > p.df(s[1]));
        }
    }
    auto a = build_profile(2, 0), b = build_profile(2, 0), c = build_profile(2, 1);
    CHECK(a.curvature == b.curvature);
    CHECK(a.curvature != c.curvature);
    CHECK(build_profile(5).segments.front()[0] < build_profile(2).segments.front()[0]);
    CHECK_THROWS_AS(build_profile(0), std::invalid_argument);
}

TEST_CASE("residual vanishes at the identity") {
    auto p = build_profile(3);
    auto x = choose_x_points(p);
    CHECK(x.cond_end);
    CHECK(x.cond_pair);
    auto r = system_residual(p, {1, 1, 1, 1}, x.x);
    for (double v : r) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("residual at k4 = 2") {
    auto p = build_profile(3);
    auto x = choose_x_points(p).x;
    auto r = system_residual(p, {1, 1, 1, 2}, x);
    // direct substitution: (k3 - k4) f'(x3) + (k4 - 1) f'(a*)
    CHECK(r[1] == doctest::Approx(p.df(p.a_star) - p.df(x[2])).epsilon(1e-14));
    double A = p.a_star;
    CHECK(r[0] == doctest::Approx(p.f(A) - p.f(x[2]) - p.df(x[2]) * (A - x[2])).epsilon(1e-14));
}

TEST_CASE("jacobian against finite differences") {
    for (int stage : {1, 2, 4}) {
        auto p = build_profile(stage, 3);
        auto x = choose_x_points(p).x;
        auto J = jacobian(p, x);
        const double h = 1e-5;
        // residual order is (end value, end slope, length); N rows are (length, end value, end slope)
        const int row_of[3] = {1, 2, 0};
        for (int s = 0; s < 4; ++s) {
            K kp{1, 1, 1, 1}, km{1, 1, 1, 1};
            kp[s] += h;
            km[s] -= h;
            auto rp = system_residual(p, kp, x), rm = system_residual(p, km, x);
            for (int r = 0; r < 3; ++r) {
                double fd = (rp[r] - rm[r]) / (2 * h);
                CHECK(std::abs(J.N[row_of[r]][s] - fd) <= 1e-6);
            }
        }
        CHECK(J.N[2][0] == doctest::Approx(p.df(x[0])));
        CHECK(J.N[2][1] == doctest::Approx(p.df(x[1]) - p.df(x[0])));
        CHECK(J.N[2][2] == doctest::Approx(p.df(x[2]) - p.df(x[1])));
        CHECK(J.N[2][3] == doctest::Approx(p.df(p.a_star) - p.df(x[2])));
        CHECK(J.rank == 3);
        CHECK(J.condition_ratio > 1e-8);
        CHECK(J.warnings.empty());

        // general-k derivative away from the identity
        K k0{1.01, 0.98, 1.02, 0.99};
        auto G = residual_jacobian(p, k0, x);
        for (int s = 0; s < 4; ++s) {
            K kp = k0, km = k0;
            kp[s] += h;
            km[s] -= h;
            auto rp = system_residual(p, kp, x), rm = system_residual(p, km, x);
            for (int r = 0; r < 3; ++r) CHECK(std::abs(G[r][s] - (rp[r] - rm[r]) / (2 * h)) <= 1e-6);
        }
    }
}

TEST_CASE("x point conditions produce warnings") {
    auto p = build_profile(2);
    auto& sg = p.segments;
    // first and last segment: x2 - x1 too large
    auto J = jacobian(p, {sg[0][0], sg[sg.size() - 2][0], sg.back()[0]});
    CHECK_FALSE(J.warnings.empty());
    CHECK_THROWS_AS(check_x_points(p, {0.5, 0.4, 0.9}), std::invalid_argument);
}

TEST_CASE("four-branch profile is C1") {
    auto p = build_profile(3);
    auto x = choose_x_points(p).x;
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (int i = 0; i < 50; ++i) {
        BentProfile b{&p, {u(g), u(g), u(g), u(g)}, x};
        CHECK(b.c1_defect() <= 1e-12);
        CHECK(b.f(0.0) == 0.0);
        CHECK(b.df(0.0) == 0.0);
    }
    // affine where f1 is affine
    BentProfile b{&p, {1.1, 0.9, 1.2, 0.8}, x};
    for (auto& s : p.segments) {
        double m = (b.f(s[1]) - b.f(s[0])) / (s[1] - s[0]);
        double mid = 0.5 * (s[0] + s[1]);
        if (s[0] < x[0] && s[1] > x[0]) continue;
        CHECK(b.f(mid) == doctest::Approx(0.5 * (b.f(s[0]) + b.f(s[1]))).epsilon(1e-12));
        CHECK(b.df(mid) == doctest::Approx(m).epsilon(1e-10));
    }
}

TEST_CASE("sup distance against a dense grid") {
    auto p = build_profile(2);
    auto x = choose_x_points(p).x;
    BentProfile b{&p, {1.02, 0.97, 1.01, 1.03}, x};
    double grid = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        double t = p.a_star * i / 200000.0;
        grid = std::max(grid, std::abs(b.f(t) - p.f(t)));
    }
    CHECK(b.sup_distance() >= grid - 1e-15);
    CHECK(b.sup_distance() <= grid + 1e-9);
}

TEST_CASE("solve bend") {
    for (int stage : {1, 3}) {
        auto p = build_profile(stage);
        auto x = choose_x_points(p);
        auto s = solve_bend(p, 1e-3, x);
        double dist = 0.0;
        for (double v : s.k) dist = std::max(dist, std::abs(v - 1.0));
        CHECK(dist >= 1e-6);
        auto r = system_residual(p, s.k, x.x);
        for (double v : r) CHECK(std::abs(v) <= 1e-10);
        CHECK(s.sup_dist <= 1e-3);
        CHECK(std::abs(s.end_slope_error) <= 1e-10);
        CHECK(std::abs(s.end_value_error) <= 1e-10);
        CHECK(s.c1_defect <= 1e-12);
        for (double v : s.k) CHECK(v > 0);
        // the branch leaves along the null direction
        double dot = 0.0, nk = 0.0;
        for (int i = 0; i < 4; ++i) {
            dot += (s.k[i] - 1.0) * s.null_direction[i];
            nk += (s.k[i] - 1.0) * (s.k[i] - 1.0);
        }
        CHECK(std::abs(dot) / std::sqrt(nk) > 0.99);
    }
    auto p = build_profile(2);
    CHECK_THROWS_AS(solve_bend(p, 0.0, choose_x_points(p)), std::invalid_argument);
    auto tight = solve_bend(p, 1e-7, choose_x_points(p));
    CHECK(tight.sup_dist <= 1e-7);
    CHECK(tight.k != K{1, 1, 1, 1});
}

TEST_CASE("phi is the identity for equal profiles") {
    auto p = build_profile(2);
    auto x = choose_x_points(p).x;
    BentProfile b{&p, {1, 1, 1, 1}, x};
    auto m = compute_phi(b);
    REQUIRE(m.nodes.size() == 1001);
    for (std::size_t i = 0; i < m.nodes.size(); ++i) CHECK(std::abs(m.phi[i] - m.nodes[i]) <= 1e-12);
}

TEST_CASE("phi preserves arclength") {
    auto p = build_profile(3);
    auto x = choose_x_points(p);
    auto s = solve_bend(p, 1e-3, x);
    auto b = s.profile(p);
    const auto& m = s.phi;
    CHECK(m.phi.front() == 0.0);
    CHECK(std::abs(m.phi.back() - p.a_star) <= 1e-9);
    for (std::size_t i = 1; i < m.phi.size(); ++i) CHECK(m.phi[i] > m.phi[i - 1]);

    auto br = b.breaks();
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(0.0, p.a_star);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double xv = u(g);
        double y = m.at(b, xv);
        double l1 = closed_length(br, [&](double t) { return p.df(t); }, y);
        double l2 = closed_length(br, [&](double t) { return b.df(t); }, xv);
        worst = std::max(worst, std::abs(l1 - l2));
        CHECK(m.inverse(b, y) == doctest::Approx(xv).epsilon(1e-12));
    }
    CHECK(worst <= 1e-9);
    CHECK(arclength(b, 1, p.a_star) == doctest::Approx(closed_length(br, [&](double t) { return p.df(t); }, 1.0)).epsilon(1e-13));
}

TEST_CASE("inconsistent lengths are rejected") {
    auto p = build_profile(2);
    auto x = choose_x_points(p).x;
    BentProfile b{&p, {1.0, 1.0, 1.0, 1.1}, x};
    CHECK_THROWS_AS(compute_phi(b), std::runtime_error);
}

TEST_CASE("isometry report") {
    auto p = build_profile(2);
    auto x = choose_x_points(p);
    BendSolution id;
    id.x_points = x;
    id.phi = compute_phi(id.profile(p));
    auto r0 = verify_isometry_F(p, id);
    CHECK(r0.max_arclength_error <= 1e-9);
    CHECK(r0.straight_segments == int(p.segments.size()));
    for (auto& s : r0.segments) {
        CHECK(s.image_a == doctest::Approx(s.a).epsilon(1e-12));
        CHECK(s.image_b == doctest::Approx(s.b).epsilon(1e-12));
    }

    auto s = solve_bend(p, 1e-3, x);
    auto r = verify_isometry_F(p, s);
    CHECK(r.samples == 100);
    CHECK(r.max_arclength_error <= 1e-9);
    REQUIRE(r.segments.size() == p.segments.size());
    for (auto& im : r.segments) {
        CHECK(im.deviation >= 0.0);
        CHECK(im.image_length == doctest::Approx(im.length).epsilon(1e-9));
    }
    auto j = to_json(s);
    CHECK(j["phi"]["x"].size() == 1001);
    CHECK(j["jacobian"]["rank"] == 3);
}
