#include "relmetric/deformation_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "relmetric/parallel.hpp"

namespace relmetric {

namespace {

constexpr double kQuadTol = 1e-12;

// Portable uniform in [0, 1).
double unit_draw(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

template <class F>
double integrate(F&& fn, double a, double b) {
    if (!(b > a)) return 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    double v = GK::integrate(fn, a, b, 0, 1.0, &err);
    if (err > 1e-2 * kQuadTol) {
        // relative tolerance matching the absolute target, floored above roundoff
        double rel = std::max(1e-15, 1e-2 * kQuadTol / std::max(std::abs(v), 1e-300));
        v = GK::integrate(fn, a, b, 12, rel, &err);
    }
    if (!(err <= kQuadTol) || !std::isfinite(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "quadrature did not converge on [" << a << ", " << b << "], error estimate " << err;
        throw std::runtime_error(os.str());
    }
    return v;
}

double speed(double d) { return std::sqrt(1.0 + d * d); }

// (u sqrt(1+u^2) + asinh u) / 2
double G(double u) { return 0.5 * (u * std::sqrt(1.0 + u * u) + std::asinh(u)); }

// Length of the graph over [0, h] when the slope is alpha + beta t.
double linear_slope_length(double alpha, double beta, double h) {
    if (h <= 0) return 0.0;
    if (std::abs(beta) * h <= 1e-9 * (1.0 + std::abs(alpha)))
        return h * speed(alpha + 0.5 * beta * h);
    return (G(alpha + beta * h) - G(alpha)) / beta;
}

std::array<double, 4> branch_offsets(const BentProfile& b, int j) {
    // C_j, D_j with f2 = D_j + C_j t + k_{j+1} f1(t) on branch j
    double C = 0.0, D = 0.0;
    for (int s = 0; s < j; ++s) {
        double dk = b.k[s] - b.k[s + 1];
        double xs = b.x[s];
        C += dk * b.f1->df(xs);
        D += dk * (b.f1->f(xs) - b.f1->df(xs) * xs);
    }
    return {C, D, b.k[j], 0.0};
}

double f_on_branch(const BentProfile& b, int j, double t) {
    auto o = branch_offsets(b, j);
    return o[1] + o[0] * t + o[2] * b.f1->f(t);
}

double df_on_branch(const BentProfile& b, int j, double t) {
    auto o = branch_offsets(b, j);
    return o[0] + o[2] * b.f1->df(t);
}

void validate_x(const ConvexProfile& p, const std::array<double, 3>& x) {
    if (!(0 < x[0] && x[0] < x[1] && x[1] < x[2] && x[2] < p.a_star))
        throw std::invalid_argument("x points must satisfy 0 < x1 < x2 < x3 < a*");
}

struct ArcTable {
    std::vector<double> breaks, cum1, cum2;
};

ArcTable arc_table(const BentProfile& b) {
    ArcTable t;
    t.breaks = b.breaks();
    t.cum1.assign(t.breaks.size(), 0.0);
    t.cum2.assign(t.breaks.size(), 0.0);
    for (std::size_t i = 0; i + 1 < t.breaks.size(); ++i) {
        double u = t.breaks[i], v = t.breaks[i + 1];
        int j = b.branch(0.5 * (u + v));
        t.cum1[i + 1] = t.cum1[i] + integrate([&](double s) { return speed(b.f1->df(s)); }, u, v);
        t.cum2[i + 1] = t.cum2[i] + integrate([&](double s) { return speed(df_on_branch(b, j, s)); }, u, v);
    }
    return t;
}

double table_length(const BentProfile& b, const std::vector<double>& breaks, const std::vector<double>& cum,
                    int which, double x) {
    x = std::clamp(x, 0.0, b.f1->a_star);
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    std::size_t i = it == breaks.begin() ? 0 : std::size_t(it - breaks.begin()) - 1;
    if (i + 1 >= breaks.size()) return cum.back();
    double u = breaks[i];
    if (which == 1) return cum[i] + integrate([&](double s) { return speed(b.f1->df(s)); }, u, x);
    int j = b.branch(0.5 * (u + breaks[i + 1]));
    return cum[i] + integrate([&](double s) { return speed(df_on_branch(b, j, s)); }, u, x);
}

// Solves length(which, y) = target for y in [0, a*].
double solve_length(const BentProfile& b, const std::vector<double>& breaks, const std::vector<double>& cum,
                    int which, double target) {
    if (target <= 0) return 0.0;
    if (target >= cum.back()) return b.f1->a_star;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t i = std::size_t(it - cum.begin()) - 1;
    double lo = breaks[i], hi = breaks[i + 1];
    auto fn = [&](double y) { return table_length(b, breaks, cum, which, y) - target; };
    double flo = cum[i] - target, fhi = cum[i + 1] - target;
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52),
                                               iters);
    return 0.5 * (r.first + r.second);
}

// Closed-form arclength of f1 (which = 1) or f2 from 0 to x.
double exact_length(const BentProfile& b, int which, double x) {
    const ConvexProfile& p = *b.f1;
    auto br = b.breaks();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < br.size() && br[i] < x; ++i) {
        double u = br[i], v = std::min(br[i + 1], x);
        std::size_t pi = p.piece(0.5 * (br[i] + br[i + 1]));
        double c = p.curvature[pi];
        double a1 = p.df(u);
        if (which == 1) {
            total += linear_slope_length(a1, c, v - u);
        } else {
            int j = b.branch(0.5 * (br[i] + br[i + 1]));
            auto o = branch_offsets(b, j);
            total += linear_slope_length(o[0] + o[2] * a1, o[2] * c, v - u);
        }
    }
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t ConvexProfile::piece(double x) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t i = it == knots.begin() ? 0 : std::size_t(it - knots.begin()) - 1;
    return std::min(i, curvature.size() - 1);
}

double ConvexProfile::f(double x) const {
    std::size_t i = piece(x);
    double h = x - knots[i];
    return value[i] + slope[i] * h + 0.5 * curvature[i] * h * h;
}

double ConvexProfile::df(double x) const {
    std::size_t i = piece(x);
    return slope[i] + curvature[i] * (x - knots[i]);
}

double ConvexProfile::c1_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double h = knots[i + 1] - knots[i];
        double v = value[i] + slope[i] * h + 0.5 * curvature[i] * h * h;
        double s = slope[i] + curvature[i] * h;
        d = std::max({d, std::abs(v - value[i + 1]), std::abs(s - slope[i + 1])});
    }
    return d;
}

ConvexProfile build_profile(int stage, std::uint64_t seed) {
    if (stage < 1) throw std::invalid_argument("stage must be >= 1");
    const double q = 0.8;
    ConvexProfile p;
    p.a_star = 1.0;
    p.stage = stage;
    p.seed = seed;

    std::vector<double> cells{0.0};
    for (int i = stage; i >= 1; --i) cells.push_back(0.5 * std::pow(q, i));
    cells.push_back(0.5);
    for (int i = 1; i <= stage; ++i) cells.push_back(1.0 - 0.5 * std::pow(q, i));
    cells.push_back(1.0);

    std::mt19937_64 rng(seed);
    p.knots.push_back(0.0);
    p.value.push_back(0.0);
    p.slope.push_back(0.0);
    auto add = [&](double to, double curv) {
        double h = to - p.knots.back();
        p.value.push_back(p.value.back() + p.slope.back() * h + 0.5 * curv * h * h);
        p.slope.push_back(p.slope.back() + curv * h);
        p.curvature.push_back(curv);
        p.knots.push_back(to);
    };
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
        double a = cells[c], w = cells[c + 1] - a;
        add(a + 0.5 * w, 1.0 + 0.5 * unit_draw(rng));
        p.segments.push_back({a + 0.5 * w, a + 0.75 * w});
        add(a + 0.75 * w, 0.0);
        add(cells[c + 1], 1.0 + 0.5 * unit_draw(rng));
    }
    p.knots.back() = p.a_star;
    std::ostringstream os;
    os << "finite surrogate of a dense segment set: " << p.segments.size()
       << " segments, left endpoints accumulating at 0 and a* with ratio " << q;
    p.density_note = os.str();
    return p;
}

XPoints check_x_points(const ConvexProfile& p, const std::array<double, 3>& x) {
    validate_x(p, x);
    XPoints r;
    r.x = x;
    r.cond_end = p.a_star - x[2] < p.f(x[2]) / p.df(x[2]);
    r.cond_pair = x[1] - x[0] < p.f(x[0]) / p.df(x[0]);
    return r;
}

XPoints choose_x_points(const ConvexProfile& p) {
    std::vector<double> left;
    for (auto& s : p.segments) left.push_back(s[0]);
    XPoints best;
    double best_ratio = -1.0;
    for (std::size_t c = 0; c < left.size(); ++c)
        for (std::size_t b = 0; b < c; ++b)
            for (std::size_t a = 0; a < b; ++a) {
                XPoints x = check_x_points(p, {left[a], left[b], left[c]});
                if (!x.cond_end || !x.cond_pair) continue;
                double ratio = jacobian(p, x.x).condition_ratio;
                if (ratio > best_ratio) {
                    best_ratio = ratio;
                    best = x;
                }
            }
    if (best_ratio < 0) throw std::runtime_error("no segment endpoints satisfy the x point conditions");
    return best;
}

// ---------------------------------------------------------------------------

int BentProfile::branch(double t) const {
    int j = 0;
    while (j < 3 && t >= x[j]) ++j;
    return j;
}

double BentProfile::f(double t) const { return f_on_branch(*this, branch(t), t); }
double BentProfile::df(double t) const { return df_on_branch(*this, branch(t), t); }

std::vector<double> BentProfile::breaks() const {
    std::vector<double> b = f1->knots;
    b.insert(b.end(), x.begin(), x.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

double BentProfile::sup_distance() const {
    auto br = breaks();
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        double u = br[i], v = br[i + 1];
        int j = branch(0.5 * (u + v));
        auto diff = [&](double t) { return f_on_branch(*this, j, t) - f1->f(t); };
        best = std::max({best, std::abs(diff(u)), std::abs(diff(v))});
        // diff' = C + (k - 1) f1', linear on the piece
        std::size_t pi = f1->piece(0.5 * (u + v));
        auto o = branch_offsets(*this, j);
        double a = o[0] + (o[2] - 1.0) * f1->df(u), bslope = (o[2] - 1.0) * f1->curvature[pi];
        if (bslope != 0.0) {
            double t = u - a / bslope;
            if (t > u && t < v) best = std::max(best, std::abs(diff(t)));
        }
    }
    return best;
}

double BentProfile::c1_defect() const {
    double d = 0.0;
    for (int j = 1; j <= 3; ++j) {
        double t = x[j - 1];
        d = std::max({d, std::abs(f_on_branch(*this, j - 1, t) - f_on_branch(*this, j, t)),
                      std::abs(df_on_branch(*this, j - 1, t) - df_on_branch(*this, j, t))});
    }
    return d;
}

// ---------------------------------------------------------------------------

std::array<double, 3> system_residual(const ConvexProfile& p, const std::array<double, 4>& k,
                                      const std::array<double, 3>& x) {
    validate_x(p, x);
    double A = p.a_star;
    std::array<double, 3> r{};
    for (int s = 0; s < 3; ++s) {
        double dk = k[s] - k[s + 1];
        r[0] += dk * (p.f(x[s]) + p.df(x[s]) * (A - x[s]));
        r[1] += dk * p.df(x[s]);
    }
    r[0] += (k[3] - 1.0) * p.f(A);
    r[1] += (k[3] - 1.0) * p.df(A);

    BentProfile b{&p, k, x};
    auto br = b.breaks();
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        double u = br[i], v = br[i + 1];
        int j = b.branch(0.5 * (u + v));
        double l1 = integrate([&](double t) { return speed(p.df(t)); }, u, v);
        double l2 = integrate([&](double t) { return speed(df_on_branch(b, j, t)); }, u, v);
        r[2] += l1 - l2;
    }
    return r;
}

std::array<std::array<double, 4>, 3> residual_jacobian(const ConvexProfile& p, const std::array<double, 4>& k,
                                                       const std::array<double, 3>& x) {
    validate_x(p, x);
    double A = p.a_star;
    std::array<std::array<double, 4>, 3> J{};
    std::array<double, 4> L{}, S{};
    for (int s = 0; s < 3; ++s) {
        L[s] = p.f(x[s]) + p.df(x[s]) * (A - x[s]);
        S[s] = p.df(x[s]);
    }
    L[3] = p.f(A);
    S[3] = p.df(A);
    for (int s = 0; s < 4; ++s) {
        J[0][s] = L[s] - (s > 0 ? L[s - 1] : 0.0);
        J[1][s] = S[s] - (s > 0 ? S[s - 1] : 0.0);
    }

    BentProfile b{&p, k, x};
    auto br = b.breaks();
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        double u = br[i], v = br[i + 1];
        int j = b.branch(0.5 * (u + v));
        for (int s = 0; s < 4; ++s) {
            // d g_j / d k_s, with s zero-based
            double cst = (s < j ? S[s] : 0.0) - (s >= 1 && s - 1 < j ? S[s - 1] : 0.0);
            bool lin = s == j;
            if (cst == 0.0 && !lin) continue;
            J[2][s] -= integrate(
                [&](double t) {
                    double g = df_on_branch(b, j, t);
                    return g * (cst + (lin ? p.df(t) : 0.0)) / speed(g);
                },
                u, v);
        }
    }
    return J;
}

JacobianReport jacobian(const ConvexProfile& p, const std::array<double, 3>& x) {
    XPoints xp = check_x_points(p, x);
    double A = p.a_star;
    JacobianReport rep;
    auto w = [&](double t) { return speed(p.df(t)); };
    // Integrals over [u, v] split at the profile knots.
    auto split = [&](auto fn, double u, double v) {
        double acc = 0.0;
        double a = u;
        for (double kn : p.knots) {
            if (kn <= a) continue;
            if (kn >= v) break;
            acc += integrate(fn, a, kn);
            a = kn;
        }
        return acc + integrate(fn, a, v);
    };
    auto tail_split = [&](double from) {
        return split([&](double t) { return p.df(t) / w(t); }, from, A);
    };
    std::array<double, 3> d{p.df(x[0]), p.df(x[1]), p.df(x[2])};
    double dA = p.df(A);

    rep.N[0][0] = -split([&](double t) { return p.df(t) * p.df(t) / w(t); }, 0.0, x[0]) - d[0] * tail_split(x[0]);
    for (int s = 1; s < 3; ++s) {
        double lo = x[s - 1], hi = x[s], ds = d[s - 1];
        rep.N[0][s] = -split([&](double t) { return p.df(t) * (p.df(t) - ds) / w(t); }, lo, hi) -
                      (d[s] - d[s - 1]) * tail_split(hi);
    }
    rep.N[0][3] = -split([&](double t) { return p.df(t) * (p.df(t) - d[2]) / w(t); }, x[2], A);

    std::array<double, 3> f{p.f(x[0]), p.f(x[1]), p.f(x[2])};
    rep.N[1][0] = f[0] + (A - x[0]) * d[0];
    rep.N[1][1] = f[1] - f[0] + (A - x[1]) * d[1] - (A - x[0]) * d[0];
    rep.N[1][2] = f[2] - f[1] + (A - x[2]) * d[2] - (A - x[1]) * d[1];
    rep.N[1][3] = p.f(A) - f[2] - (A - x[2]) * d[2];
    rep.N[2] = {d[0], d[1] - d[0], d[2] - d[1], dA - d[2]};

    Eigen::Matrix<double, 3, 4> M;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) M(r, c) = rep.N[r][c];
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(M);
    auto sv = svd.singularValues();
    for (int i = 0; i < 3; ++i) rep.singular_values[i] = sv(i);
    rep.condition_ratio = sv(0) > 0 ? sv(2) / sv(0) : 0.0;
    rep.rank = 0;
    for (int i = 0; i < 3; ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rep.rank;
    if (!xp.cond_end) rep.warnings.push_back("a* - x3 >= f(x3)/f'(x3): rank 3 not guaranteed");
    if (!xp.cond_pair) rep.warnings.push_back("x2 - x1 >= f(x1)/f'(x1): rank 3 not guaranteed");
    return rep;
}

// ---------------------------------------------------------------------------

double arclength(const BentProfile& b, int which, double x) {
    ArcTable t = arc_table(b);
    return table_length(b, t.breaks, which == 1 ? t.cum1 : t.cum2, which, x);
}

PhiMap compute_phi(const BentProfile& b, int nodes) {
    if (nodes < 2) throw std::invalid_argument("phi needs at least two nodes");
    ArcTable t = arc_table(b);
    double L1 = t.cum1.back(), L2 = t.cum2.back();
    if (std::abs(L1 - L2) > 1e-9) {
        std::ostringstream os;
        os.precision(17);
        os << "total arclengths differ: " << L1 << " vs " << L2;
        throw std::runtime_error(os.str());
    }
    PhiMap m;
    m.a_star = b.f1->a_star;
    m.total_length = L1;
    m.breaks = t.breaks;
    m.cum1 = t.cum1;
    m.cum2 = t.cum2;
    m.nodes.resize(nodes);
    m.phi.resize(nodes);
    parallel_for(std::size_t(nodes), [&](std::size_t i) {
        double x = i + 1 == std::size_t(nodes) ? m.a_star : m.a_star * double(i) / double(nodes - 1);
        m.nodes[i] = x;
        m.phi[i] = m.at(b, x);
    });
    return m;
}

double PhiMap::at(const BentProfile& b, double x) const {
    if (x <= 0) return 0.0;
    double s = table_length(b, breaks, cum2, 2, x);
    return solve_length(b, breaks, cum1, 1, s);
}

double PhiMap::inverse(const BentProfile& b, double y) const {
    if (y <= 0) return 0.0;
    double s = table_length(b, breaks, cum1, 1, y);
    return solve_length(b, breaks, cum2, 2, s);
}

// ---------------------------------------------------------------------------

BendSolution solve_bend(const ConvexProfile& p, double epsilon, const XPoints& x) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    BendSolution sol;
    sol.x_points = check_x_points(p, x.x);
    sol.jac = jacobian(p, x.x);
    if (sol.jac.rank < 3) throw std::runtime_error("jacobian rank below 3 at (1, 1, 1, 1)");

    Eigen::Matrix<double, 3, 4> M;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) M(r, c) = sol.jac.N[r][c];
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(M, Eigen::ComputeFullV);
    Eigen::Vector4d n = svd.matrixV().col(3);
    int fixed = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(n(i)) > std::abs(n(fixed))) fixed = i;
    if (n(fixed) < 0) n = -n;
    for (int i = 0; i < 4; ++i) sol.null_direction[i] = n(i);
    sol.fixed_coordinate = fixed;

    std::array<int, 3> free{};
    for (int i = 0, c = 0; i < 4; ++i)
        if (i != fixed) free[c++] = i;
    auto norm_inf = [](const std::array<double, 3>& r) {
        return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    };

    double t = epsilon;
    for (int h = 0; h <= 40; ++h, t *= 0.5) {
        std::array<double, 4> k;
        for (int i = 0; i < 4; ++i) k[i] = 1.0 + t * n(i);
        auto r = system_residual(p, k, x.x);
        double rn = norm_inf(r);
        int it = 0;
        bool ok = true;
        for (; it < 50 && rn > 1e-14; ++it) {
            auto J = residual_jacobian(p, k, x.x);
            Eigen::Matrix3d A;
            Eigen::Vector3d R;
            for (int row = 0; row < 3; ++row) {
                R(row) = r[row];
                for (int c = 0; c < 3; ++c) A(row, c) = J[row][free[c]];
            }
            Eigen::Vector3d delta = A.colPivHouseholderQr().solve(-R);
            double lambda = 1.0;
            bool moved = false;
            while (lambda > 1e-6) {
                auto kt = k;
                for (int c = 0; c < 3; ++c) kt[free[c]] += lambda * delta(c);
                if (std::all_of(kt.begin(), kt.end(), [](double v) { return v > 0; })) {
                    auto rt = system_residual(p, kt, x.x);
                    double rtn = norm_inf(rt);
                    if (rtn < rn) {
                        k = kt;
                        r = rt;
                        rn = rtn;
                        moved = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if (!moved) {
                ok = rn <= 1e-10;
                break;
            }
        }
        sol.newton_iterations += it;
        BentProfile b{&p, k, x.x};
        if (!ok || rn > 1e-10 || k == std::array<double, 4>{1, 1, 1, 1}) continue;
        double sd = b.sup_distance();
        if (sd > epsilon) continue;

        sol.k = k;
        sol.residual = r;
        sol.residual_norm = rn;
        sol.sup_dist = sd;
        sol.step = t;
        sol.halvings = h;
        sol.c1_defect = b.c1_defect();
        sol.end_value_error = b.f(p.a_star) - p.f(p.a_star);
        sol.end_slope_error = b.df(p.a_star) - p.df(p.a_star);
        sol.phi = compute_phi(b);
        return sol;
    }
    throw std::runtime_error("branch step failed");
}

// ---------------------------------------------------------------------------

IsometryFReport verify_isometry_F(const ConvexProfile& p, const BendSolution& s, std::uint64_t seed, int samples) {
    BentProfile b = s.profile(p);
    IsometryFReport rep;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        double x = p.a_star * unit_draw(rng);
        double y = s.phi.at(b, x);
        double e = std::abs(exact_length(b, 1, y) - exact_length(b, 2, x));
        rep.max_arclength_error = std::max(rep.max_arclength_error, e);
    }
    auto br = b.breaks();
    for (const auto& seg : p.segments) {
        SegmentImage im;
        im.a = seg[0];
        im.b = seg[1];
        im.image_a = s.phi.inverse(b, im.a);
        im.image_b = s.phi.inverse(b, im.b);
        im.length = (im.b - im.a) * speed(p.df(0.5 * (im.a + im.b)));
        im.image_length = exact_length(b, 2, im.image_b) - exact_length(b, 2, im.image_a);
        double ya = b.f(im.image_a), yb = b.f(im.image_b);
        double m = (yb - ya) / (im.image_b - im.image_a);
        auto gap = [&](double t) { return ya + m * (t - im.image_a) - b.f(t); };
        double worst = 0.0;
        std::vector<double> pts{im.image_a, im.image_b};
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            double u = std::max(br[i], im.image_a), v = std::min(br[i + 1], im.image_b);
            if (!(v > u)) continue;
            pts.push_back(u);
            pts.push_back(v);
            double mid = 0.5 * (u + v);
            int j = b.branch(mid);
            auto o = branch_offsets(b, j);
            std::size_t pi = p.piece(mid);
            double beta = o[2] * p.curvature[pi];
            if (beta != 0.0) {
                double tt = u + (m - df_on_branch(b, j, u)) / beta;
                if (tt > u && tt < v) pts.push_back(tt);
            }
        }
        for (double q : pts) worst = std::max(worst, std::abs(gap(q)));
        im.deviation = worst / speed(m);
        im.straight = im.deviation <= 1e-9;
        if (im.straight) ++rep.straight_segments;
        rep.max_deviation = std::max(rep.max_deviation, im.deviation);
        rep.segments.push_back(im);
    }
    return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ConvexProfile& p) {
    nlohmann::json segs = nlohmann::json::array();
    for (auto& s : p.segments) segs.push_back({s[0], s[1]});
    return {{"a_star", p.a_star}, {"stage", p.stage},       {"seed", p.seed},
            {"knots", p.knots},   {"value", p.value},       {"slope", p.slope},
            {"curvature", p.curvature}, {"segments", segs}, {"density_note", p.density_note},
            {"c1_defect", p.c1_defect()}};
}

nlohmann::json to_json(const XPoints& x) {
    return {{"x", x.x}, {"end_condition", x.cond_end}, {"pair_condition", x.cond_pair}};
}

nlohmann::json to_json(const JacobianReport& j) {
    return {{"rows", {"length", "end value", "end slope"}},
            {"N", j.N},
            {"singular_values", j.singular_values},
            {"rank", j.rank},
            {"condition_ratio", j.condition_ratio},
            {"warnings", j.warnings}};
}

nlohmann::json to_json(const PhiMap& m) {
    return {{"a_star", m.a_star}, {"total_length", m.total_length}, {"x", m.nodes}, {"phi", m.phi}};
}

nlohmann::json to_json(const BendSolution& s) {
    return {{"k", s.k},
            {"x_points", to_json(s.x_points)},
            {"residual", s.residual},
            {"residual_norm", s.residual_norm},
            {"sup_dist", s.sup_dist},
            {"step", s.step},
            {"null_direction", s.null_direction},
            {"fixed_coordinate", s.fixed_coordinate + 1},
            {"halvings", s.halvings},
            {"newton_iterations", s.newton_iterations},
            {"c1_defect", s.c1_defect},
            {"end_value_error", s.end_value_error},
            {"end_slope_error", s.end_slope_error},
            {"jacobian", to_json(s.jac)},
            {"phi", to_json(s.phi)}};
}

nlohmann::json to_json(const IsometryFReport& r) {
    nlohmann::json segs = nlohmann::json::array();
    for (auto& s : r.segments)
        segs.push_back({{"a", s.a},
                        {"b", s.b},
                        {"image_a", s.image_a},
                        {"image_b", s.image_b},
                        {"length", s.length},
                        {"image_length", s.image_length},
                        {"deviation", s.deviation},
                        {"straight", s.straight}});
    return {{"samples", r.samples},
            {"max_arclength_error", r.max_arclength_error},
            {"max_deviation", r.max_deviation},
            {"straight_segments", r.straight_segments},
            {"segments", segs}};
}

}  // namespace relmetric
