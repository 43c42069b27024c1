#include "commands.hpp"

#include <CLI11.hpp>
#include <boost/uuid/detail/sha1.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "relmetric/boundary_struct.hpp"
#include "relmetric/counterexamples.hpp"
#include "relmetric/deformation_solver.hpp"
#include "relmetric/domain.hpp"
#include "relmetric/geodesic.hpp"
#include "relmetric/parallel.hpp"
#include "relmetric/render.hpp"
#include "relmetric/rigidity.hpp"

namespace relmetric::cli {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string sha1_hex(const std::string& bytes) {
    boost::uuids::detail::sha1 h;
    h.process_bytes(bytes.data(), bytes.size());
    boost::uuids::detail::sha1::digest_type d;
    h.get_digest(d);
    std::ostringstream os;
    for (unsigned v : d) os << std::hex << std::setw(8) << std::setfill('0') << v;
    return os.str();
}

Point2 parse_xy(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("expected x,y but got '" + text + "'");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("expected x,y but got '" + text + "'");
    }
}

// "loop0@0.25": component and arclength parameter.
std::pair<BoundaryRef, double> parse_boundary(const std::string& text) {
    auto at = text.find('@');
    if (at == std::string::npos) throw UsageError("expected <component>@<s> but got '" + text + "'");
    BoundaryRef r;
    try {
        r = BoundaryRef::parse(text.substr(0, at));
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    try {
        return {r, std::stod(text.substr(at + 1))};
    } catch (const std::exception&) {
        throw UsageError("bad arclength in '" + text + "'");
    }
}

GeodesicPath path_from_json(const json& j) {
    GeodesicPath p;
    p.reachable = j.value("reachable", true);
    for (const auto& v : j.at("vertices")) p.vertices.push_back(point_from_json(v));
    if (!p.vertices.empty()) {
        p.from = p.vertices.front();
        p.to = p.vertices.back();
    }
    return p;
}

// Collects declared outputs and writes the run manifest next to --out.
class Run {
public:
    Run(std::vector<std::string> args, std::ostream& out) : args_(std::move(args)), out_(out) {
        start_ = std::chrono::steady_clock::now();
    }

    std::string input(const std::string& path) {
        std::string bytes = read_file(path);
        inputs_.push_back({{"path", path}, {"sha1", sha1_hex(bytes)}});
        return bytes;
    }

    json input_json(const std::string& path) {
        std::string bytes = input(path);
        try {
            return json::parse(bytes);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
    }

    PlanarDomain domain(const std::string& path, const char* key = "domain") {
        json j = input_json(path);
        if (j.is_object() && j.contains(key)) j = j[key];
        return domain_from_json(j);
    }

    void write(const std::string& path, const std::string& content) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << content;
        outputs_.push_back(path);
    }

    void emit(const json& result, const std::string& out_path) {
        std::string text = result.dump(2) + "\n";
        if (out_path.empty()) {
            out_ << text;
            return;
        }
        write(out_path, text);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        Tolerance tol;
        json m{{"command", args_.empty() ? "" : args_.front()},
               {"arguments", args_},
               {"version", kVersion},
               {"tolerances", {{"eps_geom", tol.eps_geom}, {"eps_flat", tol.eps_flat}, {"eps_metric", tol.eps_metric}}},
               {"inputs", inputs_},
               {"threads", thread_count()},
               {"wall_time_s", wall},
               {"outputs", outputs_}};
        std::ofstream f(out_path + ".manifest.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write manifest for " + out_path);
        f << m.dump(2) << "\n";
    }

private:
    std::vector<std::string> args_;
    std::ostream& out_;
    json inputs_ = json::array();
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

struct Check {
    json list = json::array();
    bool ok = true;
    void add(const std::string& name, bool passed, const json& value = nullptr) {
        list.push_back({{"name", name}, {"passed", passed}, {"value", value}});
        ok = ok && passed;
    }
};

// ---------------------------------------------------------------------------

struct Options {
    std::uint64_t seed = 0;
    int threads = 0;

    std::string domain, out, svg, obj;
    std::string from, to, from_xy, to_xy;
    bool certify = false;

    std::string u, v, map, mode = "local";
    double epsilon = 0.0;
    int samples = 200, anchors = 200;
    bool rigid = false;

    std::string emit = "intervals";
    int per_edge = 0, max_angles = 200;

    int depth = 1;
    double radius = 0.0;
    bool solve = false;
    double l = 1.0;
    bool check = false;
    std::string u_out, v_out, map_out;
    int facets = 32;
    int spc = 16;

    int stage = 3;
    double bend_eps = 1e-3;
    std::vector<double> x3;

    std::string scene, input, path, format = "svg";
};

int cmd_metric(Run& run, const Options& o) {
    PlanarDomain d = run.domain(o.domain);
    json result;
    GeodesicPath path;
    if (!o.from_xy.empty() || !o.to_xy.empty()) {
        if (o.from_xy.empty() || o.to_xy.empty()) throw UsageError("--from-xy and --to-xy go together");
        path = shortest_path(d, parse_xy(o.from_xy), parse_xy(o.to_xy));
        result = path_to_json(path);
    } else if (!o.from.empty() && !o.to.empty()) {
        auto [ra, sa] = parse_boundary(o.from);
        auto [rb, sb] = parse_boundary(o.to);
        auto a = boundary_point_at(d, ra, sa), b = boundary_point_at(d, rb, sb);
        auto rd = relative_boundary_distance(d, a, b, o.certify);
        path = rd.path;
        result = path_to_json(rd.path);
        result["distance"] = rd.distance;
        if (std::isfinite(rd.refinement_delta)) result["refinement_delta"] = rd.refinement_delta;
        if (!rd.truncation.empty()) result["truncation"] = rd.truncation;
    } else {
        throw UsageError("metric needs --from/--to or --from-xy/--to-xy");
    }
    if (!o.svg.empty()) run.write(o.svg, domain_svg(d, {path}));
    run.emit(result, o.out);
    return 0;
}

int cmd_classify(Run& run, const Options& o) {
    PlanarDomain d = run.domain(o.domain);
    json result = to_json(classify(d));
    run.emit(result, o.out);
    return 0;
}

BoundaryCorrespondence load_map(Run& run, const std::string& path, const PlanarDomain& U, const PlanarDomain& V) {
    json j = run.input_json(path);
    if (j.contains("generator")) {
        const json& g = j["generator"];
        if (g.value("type", "") != "bend") throw std::invalid_argument("unknown map generator");
        return gen_bend_pair(g.at("l").get<double>()).correspondence;
    }
    return correspondence_from_json(j, U, V);
}

int cmd_check_isometry(Run& run, const Options& o) {
    PlanarDomain U = run.domain(o.u), V = run.domain(o.v);
    BoundaryCorrespondence f = load_map(run, o.map, U, V);
    check_bijective(U, V, f);
    IsometryReport rep;
    if (o.mode == "global") {
        rep = check_global_isometry(U, V, f, o.samples, o.seed);
    } else if (o.mode == "local") {
        double eps = o.epsilon > 0 ? o.epsilon : default_local_epsilon(U);
        rep = check_local_isometry(U, V, f, eps, o.anchors, o.seed);
    } else {
        throw UsageError("--mode must be local or global");
    }
    json result = to_json(rep);
    if (o.rigid) result["rigid_search"] = to_json(find_rigid_motion(U, V, f, o.seed));
    run.emit(result, o.out);
    return 0;
}

int cmd_structures(Run& run, const Options& o) {
    PlanarDomain d = run.domain(o.domain);
    json result;
    if (o.emit == "intervals") {
        auto iv = enumerate_boundary_intervals(d, o.per_edge);
        result["intervals"] = json::array();
        for (const auto& i : iv) result["intervals"].push_back(to_json(i));
        if (!o.svg.empty()) run.write(o.svg, intervals_svg(d, iv));
    } else if (o.emit == "angles") {
        DomainProbe probe(d);
        auto cand = boundary_candidates(d, o.per_edge);
        std::vector<BoundaryAngle> found;
        for (std::size_t y = 0; y < cand.size() && int(found.size()) < o.max_angles; ++y)
            for (std::size_t x = 0; x < cand.size() && int(found.size()) < o.max_angles; ++x)
                for (std::size_t z = x + 1; z < cand.size() && int(found.size()) < o.max_angles; ++z) {
                    if (x == y || z == y) continue;
                    if (auto a = detect_boundary_angle(probe, cand[x], cand[y], cand[z])) found.push_back(*a);
                }
        result["angles"] = json::array();
        for (const auto& a : found) result["angles"].push_back(to_json(a));
        result["candidates"] = cand.size();
        if (!o.svg.empty()) run.write(o.svg, angles_svg(d, found));
    } else if (o.emit == "fu") {
        auto fu = decompose_Fu(d);
        result["fu"] = to_json(fu);
        if (!o.svg.empty()) run.write(o.svg, fu_svg(d, fu));
    } else {
        throw UsageError("--emit must be intervals, angles or fu");
    }
    run.emit(result, o.out);
    return 0;
}

// ---------------------------------------------------------------------------

json comb_json(int n) {
    CombDomain c = gen_comb(n);
    return {{"type", "comb"}, {"depth", n}, {"tip", json_point(c.tip)}, {"target", json_point(c.target)},
            {"domain", domain_to_json(c.domain)}};
}

int cmd_gen_comb(Run& run, const Options& o) {
    json result = comb_json(o.depth);
    if (!o.svg.empty()) {
        CombDomain c = gen_comb(o.depth);
        run.write(o.svg, domain_svg(c.domain));
    }
    run.emit(result, o.out);
    return 0;
}

int cmd_gen_obstacle(Run& run, const Options& o) {
    ObstacleTriangle t = gen_obstacle_triangle(o.depth);
    json result{{"type", "obstacle-triangle"}, {"depth", o.depth}, {"scene", to_json(t)}};
    std::optional<AvoidingPath> ap;
    if (o.solve || o.radius > 0) {
        double r = o.radius > 0 ? o.radius : 1.0 / 16.0;
        ap = shortest_avoiding_path(t, r);
        result["avoiding_path"] = to_json(*ap);
    }
    if (!o.svg.empty()) run.write(o.svg, obstacle_svg(t, ap ? &*ap : nullptr));
    run.emit(result, o.out);
    return 0;
}

json spiral_checks(const SpiralScene& s, Check& chk) {
    json labs = json::array();
    bool all = true;
    double shortest = std::numeric_limits<double>::infinity();
    for (const auto& st : s.strips) {
        auto r = labyrinth_check(st, s.samples_per_coil);
        all = all && r.passed;
        shortest = std::min(shortest, r.length);
        labs.push_back(to_json(r));
    }
    chk.add("labyrinth length >= 10 for every strip", all, shortest);
    auto dis = check_strips_disjoint(s);
    chk.add("strips pairwise disjoint", dis.band_certificate && !dis.first_colliding &&
                                            (!dis.triangle_test_run || dis.triangle_disjoint),
            to_json(dis));
    chk.add("segments ]O,A] and ]O,D] clear", probe_segments_clear(s));
    return labs;
}

int cmd_gen_spiral(Run& run, const Options& o) {
    SpiralOptions so;
    so.samples_per_coil = o.spc;
    SpiralScene s = gen_spiral_scene(o.depth, so);
    json result{{"type", "spiral-scene"}, {"depth", o.depth}, {"scene", to_json(s)}};
    if (o.check) {
        Check chk;
        result["labyrinths"] = spiral_checks(s, chk);
        result["checks"] = chk.list;
        result["passed"] = chk.ok;
    }
    if (!o.obj.empty()) {
        std::vector<Mesh> meshes;
        std::vector<std::string> names;
        for (const auto& st : s.strips) {
            meshes.push_back(strip_mesh(st, s.samples_per_coil));
            names.push_back("strip_" + std::to_string(st.level) + "_" + std::to_string(st.k));
        }
        run.write(o.obj, mesh_to_obj(meshes, names));
    }
    if (!o.svg.empty()) {
        const auto& st = s.strips.front();
        run.write(o.svg, labyrinth_svg(st, s.samples_per_coil, labyrinth_check(st, s.samples_per_coil)));
    }
    run.emit(result, o.out);
    return 0;
}

json bend_checks(const BendPair& b, int anchors, std::uint64_t seed, Check& chk) {
    auto loc = check_local_isometry(b.U, b.V, b.correspondence, b.l / 10.0, anchors, seed);
    chk.add("local isometry defect <= 1e-6 at l/10", loc.max_defect <= 1e-6, loc.max_defect);
    auto rs = find_rigid_motion(b.U, b.V, b.correspondence, seed);
    chk.add("no rigid motion, residual >= l/10", !rs.motion && rs.residual >= 0.1 * b.l, rs.residual);
    return {{"local_isometry", to_json(loc)}, {"rigid_search", to_json(rs)}};
}

int cmd_gen_bend(Run& run, const Options& o) {
    BendPair b = gen_bend_pair(o.l);
    json result{{"type", "bend"},
                {"l", o.l},
                {"radius", b.radius},
                {"P", json_point(b.P)},
                {"U", domain_to_json(b.U)},
                {"V", domain_to_json(b.V)}};
    int code = 0;
    if (o.check) {
        Check chk;
        result["report"] = bend_checks(b, o.anchors, o.seed, chk);
        result["checks"] = chk.list;
        result["passed"] = chk.ok;
        code = chk.ok ? 0 : 1;
    }
    if (!o.u_out.empty()) run.write(o.u_out, domain_to_json(b.U).dump(2) + "\n");
    if (!o.v_out.empty()) run.write(o.v_out, domain_to_json(b.V).dump(2) + "\n");
    if (!o.map_out.empty()) run.write(o.map_out, json{{"generator", {{"type", "bend"}, {"l", o.l}}}}.dump(2) + "\n");
    if (!o.svg.empty()) run.write(o.svg, bend_svg(b));
    run.emit(result, o.out);
    return code;
}

int cmd_gen_cardioid(Run& run, const Options& o) {
    CardioidSolid c = gen_cardioid_solid(o.facets);
    json result = to_json(c);
    result["type"] = "cardioid";
    if (!o.obj.empty()) run.write(o.obj, mesh_to_obj({c.mesh}, {"cardioid"}));
    if (!o.svg.empty()) run.write(o.svg, cardioid_svg(c));
    run.emit(result, o.out);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_validate(Run& run, const Options& o) {
    json j = run.input_json(o.scene);
    std::string type = j.is_object() ? j.value("type", "domain") : "domain";
    Check chk;
    json result{{"type", type}};
    if (type == "comb") {
        int n = j.at("depth").get<int>();
        chk.add("stored data matches regeneration", comb_json(n) == j);
        CombDomain c = gen_comb(n);
        bool valid = true;
        try {
            validate_domain(c.domain);
        } catch (const std::exception&) {
            valid = false;
        }
        chk.add("domain valid", valid);
        int hi = std::clamp(n, 3, 8);
        auto probe = comb_divergence_probe(2, hi);
        chk.add("probe distances strictly increasing", probe.strictly_increasing, to_json(probe));
        auto conv = convexified_probe(2, 12);
        chk.add("convexified control converges", conv.difference.back() < 1e-3, to_json(conv));
    } else if (type == "obstacle-triangle") {
        int J = j.at("depth").get<int>();
        ObstacleTriangle t = gen_obstacle_triangle(J);
        chk.add("stored scene matches regeneration", to_json(t) == j.at("scene"));
        auto bad = first_intersecting_pair(t);
        chk.add("obstacles pairwise disjoint", !bad.has_value());
        bool counts = true;
        for (int lv = 1; lv <= J; ++lv) counts = counts && t.counts[lv - 1] == level_count(lv);
        chk.add("level counts floor((2 pi)^j)", counts);
        if (J <= 2) {
            double prev = 0.0;
            bool mono = true;
            json lens = json::array();
            for (int k = 0; k <= J; ++k) {
                auto ap = shortest_avoiding_path(gen_obstacle_triangle(k), 1.0 / 16.0);
                mono = mono && ap.reachable && ap.length >= prev - 1e-12;
                prev = ap.length;
                lens.push_back(ap.length);
            }
            chk.add("avoiding path monotone in depth", mono, lens);
        }
    } else if (type == "spiral-scene") {
        const json& sc = j.at("scene");
        SpiralOptions so;
        so.coils = sc.at("coils").get<std::vector<int>>();
        so.shrink = sc.at("shrink").get<std::vector<double>>();
        so.samples_per_coil = sc.at("samples_per_coil").get<int>();
        SpiralScene s = gen_spiral_scene(j.at("depth").get<int>(), so);
        chk.add("stored scene matches regeneration", to_json(s) == sc);
        result["labyrinths"] = spiral_checks(s, chk);
    } else if (type == "bend") {
        BendPair b = gen_bend_pair(j.at("l").get<double>());
        chk.add("stored domains match regeneration", domain_to_json(b.U) == j.at("U") && domain_to_json(b.V) == j.at("V"));
        result["report"] = bend_checks(b, o.anchors, o.seed, chk);
    } else if (type == "cardioid") {
        CardioidSolid c = gen_cardioid_solid(j.at("facets").get<int>());
        auto rep = inspect_mesh(c.mesh);
        chk.add("closed oriented mesh", rep.closed && rep.oriented && rep.degenerate_faces == 0, to_json(rep));
        chk.add("euler characteristic 2", rep.euler_characteristic == 2, rep.euler_characteristic);
        const Point2 q = c.profile[c.splice_index];
        chk.add("splice on circle x^2 + z^2 = 1/9", std::abs(q.x * q.x + q.y * q.y - 1.0 / 9.0) <= 1e-12);
    } else if (type == "domain") {
        PlanarDomain d = domain_from_json(j.is_object() && j.contains("domain") ? j["domain"] : j);
        std::vector<std::string> problems;
        try {
            validate_domain(d);
        } catch (const DomainError& e) {
            problems = e.problems();
        }
        chk.add("domain valid", problems.empty(), problems);
        auto dg = diagnose(d);
        result["diagnostics"] = {{"bounded", dg.is_bounded},
                                 {"convex", dg.is_convex},
                                 {"strictly_convex", dg.is_strictly_convex_flag},
                                 {"boundary_components", dg.boundary_components}};
    } else {
        throw std::invalid_argument("unknown scene type '" + type + "'");
    }
    result["checks"] = chk.list;
    result["passed"] = chk.ok;
    run.emit(result, o.out);
    return chk.ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct BendRun {
    ConvexProfile profile;
    BendSolution solution;
    IsometryFReport isometry;
};

BendRun run_bend(int stage, double eps, const std::vector<double>& x, std::uint64_t seed) {
    BendRun r;
    r.profile = build_profile(stage, seed);
    XPoints xp = x.empty() ? choose_x_points(r.profile) : check_x_points(r.profile, {x[0], x[1], x[2]});
    r.solution = solve_bend(r.profile, eps, xp);
    r.isometry = verify_isometry_F(r.profile, r.solution, seed);
    return r;
}

int cmd_solve_bend(Run& run, const Options& o) {
    if (!o.x3.empty() && o.x3.size() != 3) throw UsageError("--x1, --x2 and --x3 go together");
    BendRun r = run_bend(o.stage, o.bend_eps, o.x3, o.seed);
    json result{{"type", "bend-solution"},
                {"stage", o.stage},
                {"epsilon", o.bend_eps},
                {"seed", o.seed},
                {"profile", to_json(r.profile)},
                {"solution", to_json(r.solution)},
                {"isometry", to_json(r.isometry)}};
    if (!o.svg.empty()) run.write(o.svg, profiles_svg(r.profile, &r.solution));
    run.emit(result, o.out);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_render(Run& run, const Options& o) {
    if (o.out.empty()) throw UsageError("render needs --out");
    if (o.format != "svg" && o.format != "obj") throw UsageError("--format must be svg or obj");
    json j = run.input_json(o.input);
    std::string type = j.is_object() ? j.value("type", "domain") : "domain";
    auto unsupported = [&]() -> int { throw UsageError("cannot render " + type + " as " + o.format); };

    std::string content;
    if (type == "domain" || type == "comb") {
        if (o.format != "svg") return unsupported();
        PlanarDomain d = domain_from_json(j.is_object() && j.contains("domain") ? j["domain"] : j);
        std::vector<GeodesicPath> paths;
        if (!o.path.empty()) paths.push_back(path_from_json(run.input_json(o.path)));
        content = domain_svg(d, paths);
    } else if (type == "obstacle-triangle") {
        if (o.format != "svg") return unsupported();
        ObstacleTriangle t = gen_obstacle_triangle(j.at("depth").get<int>());
        std::optional<AvoidingPath> ap;
        if (j.contains("avoiding_path") && j["avoiding_path"].value("reachable", false)) {
            ap.emplace();
            ap->reachable = true;
            ap->inner_radius = j["avoiding_path"].at("inner_radius").get<double>();
            ap->path = path_from_json(j["avoiding_path"].at("path"));
        }
        content = obstacle_svg(t, ap ? &*ap : nullptr);
    } else if (type == "spiral-scene") {
        const json& sc = j.at("scene");
        SpiralOptions so;
        so.coils = sc.at("coils").get<std::vector<int>>();
        so.shrink = sc.at("shrink").get<std::vector<double>>();
        so.samples_per_coil = sc.at("samples_per_coil").get<int>();
        SpiralScene s = gen_spiral_scene(j.at("depth").get<int>(), so);
        if (o.format == "obj") {
            std::vector<Mesh> meshes;
            std::vector<std::string> names;
            for (const auto& st : s.strips) {
                meshes.push_back(strip_mesh(st, s.samples_per_coil));
                names.push_back("strip_" + std::to_string(st.level) + "_" + std::to_string(st.k));
            }
            content = mesh_to_obj(meshes, names);
        } else {
            const auto& st = s.strips.front();
            content = labyrinth_svg(st, s.samples_per_coil, labyrinth_check(st, s.samples_per_coil));
        }
    } else if (type == "bend") {
        if (o.format != "svg") return unsupported();
        content = bend_svg(gen_bend_pair(j.at("l").get<double>()));
    } else if (type == "cardioid") {
        CardioidSolid c = gen_cardioid_solid(j.at("facets").get<int>());
        content = o.format == "obj" ? mesh_to_obj({c.mesh}, {"cardioid"}) : cardioid_svg(c);
    } else if (type == "bend-solution") {
        if (o.format != "svg") return unsupported();
        std::vector<double> x = j.at("solution").at("x_points").at("x").get<std::vector<double>>();
        BendRun r = run_bend(j.at("stage").get<int>(), j.at("epsilon").get<double>(), x,
                             j.at("seed").get<std::uint64_t>());
        content = profiles_svg(r.profile, &r.solution);
    } else {
        return unsupported();
    }
    run.write(o.out, content);
    return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Relative metrics on planar domain boundaries", "relmetric"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed, "Seed for all sampling")->capture_default_str();
    app.add_option("--threads", o.threads, "Worker cap (default: BOUNDARY_RIGIDITY_THREADS, then 1)");
    app.set_version_flag("--version", kVersion);

    auto* metric = app.add_subcommand("metric", "Relative or intrinsic distance with the shortest path");
    metric->add_option("--domain", o.domain)->required();
    metric->add_option("--from", o.from, "Boundary point, e.g. loop0@0.25");
    metric->add_option("--to", o.to);
    metric->add_option("--from-xy", o.from_xy, "Point x,y");
    metric->add_option("--to-xy", o.to_xy);
    metric->add_flag("--certify", o.certify, "Report the refinement delta");
    metric->add_option("--svg", o.svg);
    metric->add_option("--out", o.out);

    auto* cls = app.add_subcommand("classify", "Unique-determination verdict");
    cls->add_option("--domain", o.domain)->required();
    cls->add_option("--out", o.out);

    auto* iso = app.add_subcommand("check-isometry", "Boundary isometry check for a correspondence");
    iso->add_option("--u", o.u)->required();
    iso->add_option("--v", o.v)->required();
    iso->add_option("--map", o.map)->required();
    iso->add_option("--mode", o.mode)->check(CLI::IsMember({"local", "global"}));
    iso->add_option("--epsilon", o.epsilon, "Local radius (default: 1/20 of the shortest feature)");
    iso->add_option("--samples", o.samples);
    iso->add_option("--anchors", o.anchors);
    iso->add_flag("--rigid", o.rigid, "Also search for a rigid motion");
    iso->add_option("--out", o.out);

    auto* st = app.add_subcommand("structures", "Boundary intervals, angles or the F_U decomposition");
    st->add_option("--domain", o.domain)->required();
    st->add_option("--emit", o.emit)->check(CLI::IsMember({"intervals", "angles", "fu"}));
    st->add_option("--samples-per-edge", o.per_edge);
    st->add_option("--max-angles", o.max_angles);
    st->add_option("--svg", o.svg);
    st->add_option("--out", o.out);

    auto* gen = app.add_subcommand("gen", "Counterexample generators");
    gen->require_subcommand(1);
    gen->fallthrough();
    auto* comb = gen->add_subcommand("comb", "Comb domain");
    comb->add_option("--depth", o.depth)->required();
    comb->add_option("--svg", o.svg);
    comb->add_option("--out", o.out);
    auto* obst = gen->add_subcommand("obstacle-triangle", "Planar obstacle scene");
    obst->add_option("--depth", o.depth)->required();
    obst->add_option("--radius", o.radius, "Inner exclusion radius; implies --solve");
    obst->add_flag("--solve", o.solve, "Shortest avoiding path (radius 1/16 unless given)");
    obst->add_option("--svg", o.svg);
    obst->add_option("--out", o.out);
    auto* spiral = gen->add_subcommand("spiral-scene", "Spiral strips");
    spiral->add_option("--depth", o.depth)->required();
    spiral->add_option("--samples-per-coil", o.spc);
    spiral->add_flag("--check", o.check);
    spiral->add_option("--obj", o.obj);
    spiral->add_option("--svg", o.svg, "Labyrinth of the first strip");
    spiral->add_option("--out", o.out);
    auto* bend = gen->add_subcommand("bend", "Bend pair");
    bend->add_option("--l", o.l)->required();
    bend->add_flag("--check", o.check, "Local isometry and rigid-motion checks");
    bend->add_option("--anchors", o.anchors);
    bend->add_option("--u-out", o.u_out);
    bend->add_option("--v-out", o.v_out);
    bend->add_option("--map-out", o.map_out);
    bend->add_option("--svg", o.svg);
    bend->add_option("--out", o.out);
    auto* card = gen->add_subcommand("cardioid", "Cardioid solid of revolution");
    card->add_option("--facets", o.facets)->required();
    card->add_option("--obj", o.obj);
    card->add_option("--svg", o.svg);
    card->add_option("--out", o.out);

    auto* val = app.add_subcommand("validate", "Property suite for a generated scene or a domain");
    val->add_option("scene", o.scene)->required();
    val->add_option("--anchors", o.anchors);
    val->add_option("--out", o.out);

    auto* sb = app.add_subcommand("solve-bend", "Deformed convex profile with an intrinsic isometry");
    sb->add_option("--stage", o.stage)->check(CLI::PositiveNumber);
    sb->add_option("--epsilon", o.bend_eps)->check(CLI::PositiveNumber);
    double x1 = 0, x2 = 0, x3 = 0;
    auto* ox1 = sb->add_option("--x1", x1);
    auto* ox2 = sb->add_option("--x2", x2);
    auto* ox3 = sb->add_option("--x3", x3);
    sb->add_option("--svg", o.svg);
    sb->add_option("--out", o.out);

    auto* rd = app.add_subcommand("render", "SVG or OBJ from a domain, scene or solution file");
    rd->add_option("--input", o.input)->required();
    rd->add_option("--path", o.path, "Metric result to overlay");
    rd->add_option("--format", o.format)->check(CLI::IsMember({"svg", "obj"}));
    rd->add_option("--out", o.out);

    std::vector<std::string> argv_store{"relmetric"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (o.threads < 0) {
        err << "error: --threads must be >= 0\n";
        return 2;
    }
    if (o.threads > 0) set_thread_count(o.threads);
    int given = int(ox1->count() > 0) + int(ox2->count() > 0) + int(ox3->count() > 0);
    if (given == 3) o.x3 = {x1, x2, x3};

    Run run(args, out);
    try {
        if (given != 0 && given != 3) throw UsageError("--x1, --x2 and --x3 go together");
        if (metric->parsed()) return cmd_metric(run, o);
        if (cls->parsed()) return cmd_classify(run, o);
        if (iso->parsed()) return cmd_check_isometry(run, o);
        if (st->parsed()) return cmd_structures(run, o);
        if (comb->parsed()) return cmd_gen_comb(run, o);
        if (obst->parsed()) return cmd_gen_obstacle(run, o);
        if (spiral->parsed()) return cmd_gen_spiral(run, o);
        if (bend->parsed()) return cmd_gen_bend(run, o);
        if (card->parsed()) return cmd_gen_cardioid(run, o);
        if (val->parsed()) return cmd_validate(run, o);
        if (sb->parsed()) return cmd_solve_bend(run, o);
        if (rd->parsed()) return cmd_render(run, o);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no command\n";
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace relmetric::cli
