// One PASS/FAIL line per acceptance criterion. Tolerances are pinned below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "relmetric/boundary_struct.hpp"
#include "relmetric/counterexamples.hpp"
#include "relmetric/deformation_solver.hpp"
#include "relmetric/geodesic.hpp"
#include "relmetric/parallel.hpp"
#include "relmetric/rigidity.hpp"

using namespace relmetric;
using json = nlohmann::json;

namespace {

constexpr double kConvexTol = 1e-9;
constexpr double kTriangleTol = 1e-9;
constexpr double kGridTol = 2e-3;
constexpr double kGridSpacing = 1e-3;
constexpr double kCombMinStep = 0.05;
constexpr double kCombGoldenTol = 1e-9;
constexpr double kControlTol = 1e-3;
constexpr double kObstacleTarget = 5.5;
constexpr double kObstacleRadius = 1.0 / 16.0;
constexpr double kLabyrinthTarget = 10.0;
constexpr double kNearLeg = 1.05;
constexpr double kFarLeg = 2.3;
constexpr double kBendDefect = 1e-6;
constexpr double kBendResidual = 0.1;  // times l
constexpr double kRigidTol = 1e-9;
constexpr double kLemmaResidual0 = 1e-12;
constexpr double kLemmaRank = 1e-8;
constexpr double kLemmaStep = 1e-6;
constexpr double kLemmaResidual = 1e-10;
constexpr double kLemmaSup = 1e-3;
constexpr double kLemmaArc = 1e-9;
constexpr double kLemmaC1 = 1e-12;

// Criteria expected to fail, with the reason printed beside the line.
const std::map<int, std::string> kExpectedFailures = {
    {5, "finite truncation at depth 3 with the 1/16 exclusion disk leaves a path far shorter than 5.5"},
};

struct Outcome {
    bool pass = false;
    std::string detail;
    json artifact;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string data(const std::string& name) { return std::string(RELMETRIC_DATA_DIR) + "/" + name; }

// --- 1 -----------------------------------------------------------------------
Outcome convexity_identity(std::uint64_t seed) {
    double worst = 0.0;
    int pairs = 0;
    json per = json::array();
    for (int t = 0; t < 100; ++t) {
        std::mt19937_64 rng(seed * 1000 + t);
        auto d = make_polygon_domain(fixtures::random_convex(rng, 40));
        GeodesicEngine e(d);
        BoundaryRef L0{BoundaryRef::Kind::loop, 0};
        double L = d.loops[0].length();
        std::uniform_real_distribution<double> U(0.0, L);
        double w = 0.0;
        for (int k = 0; k < 1000; ++k) {
            auto a = boundary_point_at(d, L0, U(rng)), b = boundary_point_at(d, L0, U(rng));
            double r = e.shortest_path(e.query_for(a), e.query_for(b)).length;
            w = std::max(w, std::abs(r - distance(a.xy, b.xy)));
            ++pairs;
        }
        per.push_back(w);
        worst = std::max(worst, w);
    }
    return {worst <= kConvexTol,
            "max |rho - |a-b|| = " + fmt(worst) + " over " + std::to_string(pairs) + " pairs (tol 1e-9)",
            {{"max_error", worst}, {"per_polygon", per}}};
}

// --- 2 -----------------------------------------------------------------------
Outcome metric_axioms(std::uint64_t seed) {
    double tri = 0.0;
    std::vector<std::vector<Point2>> rings;
    json per = json::array();
    for (int t = 0; t < 20; ++t) {
        std::mt19937_64 rng(seed * 1000 + 500 + t);
        auto ring = fixtures::random_simple(rng, 12 + t % 10);
        auto d = make_polygon_domain(ring);
        validate_domain(d);
        auto rep = verify_metric_axioms(d, 1000, seed + t);
        tri = std::max(tri, rep.max_triangle_violation);
        per.push_back({{"triangle", rep.max_triangle_violation}, {"symmetry", rep.max_symmetry_violation}});
        if (t < 3) rings.push_back(ring);
    }
    double grid_err = 0.0;
    int grid_pairs = 0;
    json grid = json::array();
    for (std::size_t t = 0; t < rings.size(); ++t) {
        auto d = make_polygon_domain(rings[t]);
        GeodesicEngine e(d);
        std::mt19937_64 rng(seed * 7 + t);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        // interior points kept 0.01 away from the boundary so grid snapping stays local
        auto draw = [&]() {
            while (true) {
                Point2 p{U(rng), U(rng)};
                if (oracles::in_ring_closed(p, rings[t], 0.0) && ring_distance(p, rings[t]) > 0.01) return p;
            }
        };
        Point2 p = draw();
        std::vector<Point2> targets;
        for (int k = 0; k < 10; ++k) targets.push_back(draw());
        auto ref = oracles::grid_geodesic(rings[t], p, targets, kGridSpacing);
        for (std::size_t k = 0; k < targets.size(); ++k) {
            double ex = e.distance({p, {}}, {targets[k], {}});
            grid_err = std::max(grid_err, std::abs(ex - ref[k]));
            grid.push_back({ex, ref[k]});
            ++grid_pairs;
        }
    }
    bool pass = tri <= kTriangleTol && grid_err <= kGridTol;
    return {pass,
            "max triangle violation = " + fmt(tri) + " (tol 1e-9) on 20 polygons x 1000 triples; grid oracle max diff = " +
                fmt(grid_err) + " over " + std::to_string(grid_pairs) + " pairs (tol 2e-3)",
            {{"triangle", tri}, {"per_polygon", per}, {"grid_pairs", grid}}};
}

// --- 3 -----------------------------------------------------------------------
Outcome h_structure(std::uint64_t seed) {
    int total = 0, good = 0;
    for (int t = 0; t < 50; ++t) {
        std::mt19937_64 rng(seed * 1000 + 200 + t);
        auto d = make_polygon_domain(fixtures::random_simple(rng, 10 + t % 15));
        GeodesicEngine e(d);
        BoundaryRef L0{BoundaryRef::Kind::loop, 0};
        double L = d.loops[0].length();
        std::uniform_real_distribution<double> U(0.0, L);
        for (int k = 0; k < 20; ++k) {
            auto a = boundary_point_at(d, L0, U(rng)), b = boundary_point_at(d, L0, U(rng));
            auto p = e.shortest_path(e.query_for(a), e.query_for(b));
            ++total;
            if (check_h_structure(p, d)) ++good;
        }
    }
    return {good == total, std::to_string(good) + "/" + std::to_string(total) + " paths pass check_h_structure",
            {{"paths", total}, {"passed", good}}};
}

// --- 4 -----------------------------------------------------------------------
Outcome comb(std::uint64_t) {
    auto p = comb_divergence_probe(2, 8);
    auto c = convexified_probe(2, 12);
    std::ifstream in(data("golden/comb_probe.json"));
    json golden = json::parse(in);
    double gdiff = 0.0;
    auto gd = golden.at("distance").get<std::vector<double>>();
    bool shape = gd.size() == p.distance.size();
    for (std::size_t i = 0; shape && i < gd.size(); ++i) gdiff = std::max(gdiff, std::abs(gd[i] - p.distance[i]));
    double last = std::abs(c.difference.back());
    bool pass = p.strictly_increasing && p.min_difference >= kCombMinStep && shape && gdiff <= kCombGoldenTol &&
                last <= kControlTol;
    return {pass,
            "comb n=2..8 min step = " + fmt(p.min_difference) + " (>= 0.05), golden diff = " + fmt(gdiff) +
                "; convexified last step = " + fmt(last) + " (<= 1e-3)",
            {{"comb", to_json(p)}, {"convexified", to_json(c)}}};
}

// --- 5 -----------------------------------------------------------------------
Outcome obstacle(std::uint64_t) {
    std::vector<double> len;
    json runs = json::array();
    bool reach = true;
    for (int J = 1; J <= 3; ++J) {
        auto ap = shortest_avoiding_path(gen_obstacle_triangle(J), kObstacleRadius);
        reach = reach && ap.reachable;
        len.push_back(ap.reachable ? ap.length : std::numeric_limits<double>::infinity());
        json a = to_json(ap);
        a["depth"] = J;
        runs.push_back(a);
    }
    bool mono = len[1] >= len[0] - 1e-12 && len[2] >= len[1] - 1e-12;
    bool pass = reach && mono && len[2] >= kObstacleTarget;
    return {pass,
            "lengths J=1,2,3 at r=1/16: " + fmt(len[0]) + ", " + fmt(len[1]) + ", " + fmt(len[2]) +
                (mono ? " (monotone)" : " (NOT monotone)") + "; need >= 5.5 at J=3",
            {{"runs", runs}}};
}

// --- 6 -----------------------------------------------------------------------
Outcome labyrinths(std::uint64_t) {
    double shortest = std::numeric_limits<double>::infinity();
    int strips = 0, ok = 0;
    json per = json::array();
    for (int J = 1; J <= 2; ++J) {
        auto s = gen_spiral_scene(J);
        for (const auto& st : s.strips) {
            auto r = labyrinth_check(st, s.samples_per_coil, kLabyrinthTarget);
            ++strips;
            if (r.length >= kLabyrinthTarget) ++ok;
            shortest = std::min(shortest, r.length);
            per.push_back({{"depth", J}, {"level", st.level}, {"k", st.k}, {"coils", st.coils}, {"length", r.length}});
        }
    }
    return {ok == strips,
            std::to_string(ok) + "/" + std::to_string(strips) + " plane spirals with path >= 10; shortest " +
                fmt(shortest),
            {{"strips", per}}};
}

// --- 7 -----------------------------------------------------------------------
Outcome lattice3d(std::uint64_t) {
    std::vector<SpiralScene> scenes{gen_spiral_scene(1), gen_spiral_scene(2)};
    auto lv = estimate_3d_geodesics(scenes);
    bool pass = lv.size() >= 2;
    std::ostringstream os;
    json arr = json::array();
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const auto& g = lv[i];
        pass = pass && g.connected && g.d_AO <= kNearLeg && g.d_OD <= kNearLeg && g.d_AD >= kFarLeg;
        if (i > 0) pass = pass && g.d_AD >= lv[i - 1].d_AD - 1e-12;
        os << (i ? "; " : "") << "J=" << g.depth << ": AO " << fmt(g.d_AO) << ", OD " << fmt(g.d_OD) << ", AD "
           << fmt(g.d_AD);
        arr.push_back(to_json(g));
    }
    os << " (graph upper bounds, evidence only)";
    return {pass, os.str(), {{"levels", arr}}};
}

// --- 8 -----------------------------------------------------------------------
Outcome bend(std::uint64_t seed) {
    const double l = 1.0;
    auto b = gen_bend_pair(l);
    auto loc = check_local_isometry(b.U, b.V, b.correspondence, l / 10.0, 1000, seed);
    auto rs = find_rigid_motion(b.U, b.V, b.correspondence, seed);
    bool pass = loc.max_defect <= kBendDefect && !rs.motion && rs.residual >= kBendResidual * l;
    return {pass,
            "local defect = " + fmt(loc.max_defect) + " at eps=l/10, 1000 anchors (tol 1e-6); rigid motion " +
                (rs.motion ? "FOUND" : "none") + ", best residual = " + fmt(rs.residual) + " (>= 0.1 l)",
            {{"local", to_json(loc)}, {"rigid", to_json(rs)}}};
}

// --- 9 -----------------------------------------------------------------------
Outcome rigid_recovery(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 1000 + 900);
    std::uniform_real_distribution<double> A(-kPi, kPi), T(-5, 5);
    double worst = 0.0;
    int recovered = 0;
    for (int t = 0; t < 20; ++t) {
        auto D = fixtures::random_strictly_convex_arcs(rng);
        RigidMotion2 q{A(rng), {T(rng), T(rng)}, t % 2 == 1};
        auto E = transform_domain(D, q);
        auto r = find_rigid_motion(D, E, motion_correspondence(D, E, q), seed + t);
        worst = std::max(worst, r.residual);
        if (r.motion && r.residual <= kRigidTol && r.motion->reflect == q.reflect) ++recovered;
    }
    return {recovered == 20,
            std::to_string(recovered) + "/20 motions recovered (10 with reflection); max residual = " + fmt(worst) +
                " (tol 1e-9)",
            {{"recovered", recovered}, {"max_residual", worst}}};
}

// --- 10 ----------------------------------------------------------------------
Outcome classifier(std::uint64_t) {
    struct Row {
        const char* name;
        PlanarDomain d;
        const char* verdict;
        const char* rule;  // empty: any
    };
    std::vector<Row> rows{
        {"unit square", fixtures::unit_square(), "UniquelyDetermined", "Cor1.2"},
        {"half-plane", fixtures::halfplane_below(), "NotUniquelyDetermined", "Thm1.1-I"},
        {"quadrant", fixtures::quadrant(), "UniquelyDetermined", "Thm1.2"},
        {"complement of point", fixtures::complement_of_point(), "UniquelyDetermined", ""},
        {"complement of segment", fixtures::complement_of_segment(), "NotUniquelyDetermined", "Thm1.1-I"},
    };
    bool pass = true;
    std::ostringstream os;
    json arr = json::array();
    for (auto& r : rows) {
        auto c = classify(r.d);
        bool ok = to_string(c.verdict) == r.verdict && (std::string(r.rule).empty() || c.rule == r.rule);
        pass = pass && ok;
        if (!ok) os << r.name << " -> " << to_string(c.verdict) << "/" << c.rule << "; ";
        arr.push_back({{"domain", r.name}, {"verdict", to_string(c.verdict)}, {"rule", c.rule}});
    }
    auto fu = decompose_Fu(fixtures::strip_complement());
    pass = pass && fu.boundary_F_components == 2;
    arr.push_back({{"domain", "parallel-strip complement"}, {"boundary_F_components", fu.boundary_F_components}});
    os << "5/5 verdicts " << (pass ? "match" : "checked") << "; strip complement dF_U components = "
       << fu.boundary_F_components;
    return {pass, os.str(), {{"table", arr}}};
}

// --- 11 ----------------------------------------------------------------------
Outcome lemma(std::uint64_t seed) {
    auto p = build_profile(3, seed);
    auto x = choose_x_points(p);
    auto r0 = system_residual(p, {1, 1, 1, 1}, x.x);
    double res0 = std::max({std::abs(r0[0]), std::abs(r0[1]), std::abs(r0[2])});
    auto J = jacobian(p, x.x);
    auto s = solve_bend(p, 1e-3, x);
    double step = 0.0;
    for (double v : s.k) step = std::max(step, std::abs(v - 1.0));
    auto r = system_residual(p, s.k, x.x);
    double res = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    auto iso = verify_isometry_F(p, s, seed);
    bool pass = res0 <= kLemmaResidual0 && J.condition_ratio > kLemmaRank && x.cond_end && x.cond_pair &&
                step >= kLemmaStep && res <= kLemmaResidual && s.sup_dist <= kLemmaSup &&
                iso.max_arclength_error <= kLemmaArc && s.c1_defect <= kLemmaC1;
    std::ostringstream os;
    os << "residual(1) = " << fmt(res0) << ", sigma3/sigma1 = " << fmt(J.condition_ratio) << ", |k-1| = " << fmt(step)
       << ", residual = " << fmt(res) << ", sup = " << fmt(s.sup_dist) << ", arclength err = "
       << fmt(iso.max_arclength_error) << ", C1 defect = " << fmt(s.c1_defect) << "; straight images "
       << iso.straight_segments << "/" << iso.segments.size();
    return {pass, os.str(), {{"solution", to_json(s)}, {"isometry", to_json(iso)}}};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome(std::uint64_t)> fn;
    double time_limit;  // seconds, 0 for none
};

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 0;
    std::vector<Criterion> cs{
        {1, "convexity-geodesic identity", convexity_identity, 60},
        {2, "metric axioms and grid oracle", metric_axioms, 0},
        {3, "geodesic h-structure", h_structure, 0},
        {4, "comb divergence", comb, 0},
        {5, "obstacle triangle", obstacle, 600},
        {6, "spiral labyrinth", labyrinths, 0},
        {7, "3D triangle-inequality evidence", lattice3d, 0},
        {8, "bend pair", bend, 0},
        {9, "rigid recovery", rigid_recovery, 0},
        {10, "classifier golden table", classifier, 0},
        {11, "deformation lemma suite", lemma, 60},
    };

    namespace fs = std::filesystem;
    fs::create_directories("acceptance_artifacts");
    std::map<int, std::string> first;
    int unexpected = 0, passed = 0;
    for (const auto& c : cs) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn(seed);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), {}};
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = c.time_limit <= 0 || dt <= c.time_limit;
        bool pass = o.pass && in_time;
        std::string text = o.artifact.dump(2) + "\n";
        first[c.id] = text;
        char name[64];
        std::snprintf(name, sizeof name, "acceptance_artifacts/criterion_%02d.json", c.id);
        std::ofstream(name, std::ios::binary) << text;

        std::printf("%s %2d %s: %s; %.1f s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), dt,
                    c.time_limit > 0 ? (in_time ? " (within limit)" : " (OVER TIME LIMIT)") : "");
        auto xf = kExpectedFailures.find(c.id);
        if (!pass && xf != kExpectedFailures.end()) std::printf("     expected failure: %s\n", xf->second.c_str());
        if (pass && xf != kExpectedFailures.end()) {
            std::printf("     listed as an expected failure but passed\n");
            ++unexpected;
        }
        if (!pass && xf == kExpectedFailures.end()) ++unexpected;
        if (pass) ++passed;
        std::fflush(stdout);
    }

    // 12: rerun everything with another worker count and compare the JSON byte for byte.
    auto t0 = std::chrono::steady_clock::now();
    set_thread_count(2);
    int same = 0;
    std::vector<int> differing;
    for (const auto& c : cs) {
        std::string text;
        try {
            text = c.fn(seed).artifact.dump(2) + "\n";
        } catch (const std::exception& e) {
            text = std::string("exception: ") + e.what();
        }
        if (text == first[c.id])
            ++same;
        else
            differing.push_back(c.id);
    }
    set_thread_count(0);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool det = differing.empty();
    std::string diff_list;
    for (int id : differing) diff_list += " " + std::to_string(id);
    std::printf("%s 12 determinism: %d/%zu JSON artifacts byte-identical on a second run with 2 workers%s; %.1f s\n",
                det ? "PASS" : "FAIL", same, cs.size(), det ? "" : (", differing:" + diff_list).c_str(), dt);
    if (det) ++passed;
    else ++unexpected;

    std::printf("%d/12 criteria pass; %d unexpected result(s)\n", passed, unexpected);
    return unexpected == 0 ? 0 : 1;
}
