#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "relmetric/geom_core.hpp"

namespace oracles {

using relmetric::Point2;

inline bool in_ring_closed(const Point2& p, const std::vector<Point2>& ring, double tol) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = ring[i];
        const Point2& b = ring[j];
        if (relmetric::point_segment_distance(p, a, b) <= tol) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

// Segment inside the closed polygon, checked by dense sampling.
inline bool sampled_visible(const Point2& a, const Point2& b, const std::vector<Point2>& ring, double step) {
    int n = std::max(2, static_cast<int>(std::ceil(relmetric::distance(a, b) / step)));
    for (int i = 0; i <= n; ++i)
        if (!in_ring_closed(a + (b - a) * (static_cast<double>(i) / n), ring, 1e-9)) return false;
    return true;
}

// Grid-graph shortest path in a simple polygon: 8-neighbour Dijkstra on grid nodes at
// spacing h, followed by greedy string pulling with sampled visibility. The result is a
// feasible path, so it bounds the geodesic from above up to the sampling resolution.
inline std::vector<double> grid_geodesic(const std::vector<Point2>& ring, const Point2& p,
                                         const std::vector<Point2>& targets, double h) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& v : ring) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    const int nx = static_cast<int>(std::ceil((x1 - x0) / h)) + 1;
    const int ny = static_cast<int>(std::ceil((y1 - y0) / h)) + 1;
    auto id = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
    auto pos = [&](std::size_t k) { return Point2{x0 + h * static_cast<double>(k % nx), y0 + h * static_cast<double>(k / nx)}; };

    // Row-wise scanline fill: a node is usable when it lies in the closed polygon.
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny, 0);
    for (int j = 0; j < ny; ++j) {
        double y = y0 + h * j;
        std::vector<double> xs;
        const std::size_t n = ring.size();
        for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
            const Point2& u = ring[a];
            const Point2& v = ring[b];
            if ((u.y > y) != (v.y > y)) xs.push_back(u.x + (y - u.y) * (v.x - u.x) / (v.y - u.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            int i0 = std::max(0, static_cast<int>(std::ceil((xs[k] - x0) / h)));
            int i1 = std::min(nx - 1, static_cast<int>(std::floor((xs[k + 1] - x0) / h)));
            for (int i = i0; i <= i1; ++i) mask[id(i, j)] = 1;
        }
    }
    auto nearest_node = [&](const Point2& q) {
        int ci = static_cast<int>(std::round((q.x - x0) / h)), cj = static_cast<int>(std::round((q.y - y0) / h));
        std::size_t best = 0;
        double bd = 1e300;
        for (int r = 0; r < 6 && bd == 1e300; ++r)
            for (int i = ci - r; i <= ci + r; ++i)
                for (int j = cj - r; j <= cj + r; ++j) {
                    if (i < 0 || j < 0 || i >= nx || j >= ny || !mask[id(i, j)]) continue;
                    double dd = relmetric::distance(pos(id(i, j)), q);
                    if (dd < bd && sampled_visible(q, pos(id(i, j)), ring, h / 4)) {
                        bd = dd;
                        best = id(i, j);
                    }
                }
        return best;
    };
    const std::size_t src = nearest_node(p);
    std::vector<float> dist(mask.size(), std::numeric_limits<float>::infinity());
    std::vector<std::int32_t> prev(mask.size(), -1);
    using Item = std::pair<float, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0;
    heap.push({0.0f, static_cast<std::uint32_t>(src)});
    const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const float w[8] = {1, 1, 1, 1, static_cast<float>(std::sqrt(2.0)), static_cast<float>(std::sqrt(2.0)),
                        static_cast<float>(std::sqrt(2.0)), static_cast<float>(std::sqrt(2.0))};
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        int i = static_cast<int>(u % nx), j = static_cast<int>(u / nx);
        for (int k = 0; k < 8; ++k) {
            int a = i + di[k], b = j + dj[k];
            if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
            std::size_t v = id(a, b);
            if (!mask[v]) continue;
            if (k >= 4 && !(mask[id(a, j)] && mask[id(i, b)])) continue;
            float nd = d + w[k] * static_cast<float>(h);
            if (nd < dist[v]) {
                dist[v] = nd;
                prev[v] = static_cast<std::int32_t>(u);
                heap.push({nd, static_cast<std::uint32_t>(v)});
            }
        }
    }
    std::vector<double> out;
    for (const auto& q : targets) {
        std::size_t dst = nearest_node(q);
        if (!std::isfinite(dist[dst])) {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        std::vector<Point2> path{q};
        for (std::int64_t c = static_cast<std::int64_t>(dst); c >= 0; c = prev[c]) path.push_back(pos(static_cast<std::size_t>(c)));
        path.push_back(p);
        std::reverse(path.begin(), path.end());
        // Greedy string pulling: from each anchor jump to the farthest visible path point.
        // Visibility is not monotone along the grid path, so scan down from the far end.
        std::vector<std::size_t> keep{0};
        while (keep.back() + 1 < path.size()) {
            std::size_t a = keep.back(), b = path.size() - 1;
            while (b > a + 1 && !sampled_visible(path[a], path[b], ring, h / 4)) --b;
            keep.push_back(b);
        }
        // Greedy jumps overshoot corners; slide each interior vertex along the grid path to
        // the node minimising its two legs while both stay visible.
        for (int pass = 0; pass < 4; ++pass) {
            bool moved = false;
            for (std::size_t k = 1; k + 1 < keep.size(); ++k) {
                const Point2& u = path[keep[k - 1]];
                const Point2& w = path[keep[k + 1]];
                std::size_t best = keep[k];
                double bl = relmetric::distance(u, path[best]) + relmetric::distance(path[best], w);
                for (std::size_t c = keep[k - 1] + 1; c < keep[k + 1]; ++c) {
                    double l = relmetric::distance(u, path[c]) + relmetric::distance(path[c], w);
                    if (l < bl - 1e-15 && sampled_visible(u, path[c], ring, h / 4) &&
                        sampled_visible(path[c], w, ring, h / 4)) {
                        bl = l;
                        best = c;
                    }
                }
                moved = moved || best != keep[k];
                keep[k] = best;
            }
            if (!moved) break;
        }
        std::vector<Point2> pulled;
        for (std::size_t k : keep) pulled.push_back(path[k]);
        double len = 0;
        for (std::size_t k = 0; k + 1 < pulled.size(); ++k) len += relmetric::distance(pulled[k], pulled[k + 1]);
        out.push_back(len);
    }
    return out;
}

// Closed-form arclength of the parabola-type integrand: int sqrt(1 + u^2) du.
inline double sqrt1pu2_antiderivative(double u) { return 0.5 * (u * std::sqrt(1 + u * u) + std::asinh(u)); }

// Signed volume of the tetrahedron (a, b, c, d), times 6.
inline double orient3(const relmetric::Point3& a, const relmetric::Point3& b, const relmetric::Point3& c,
                      const relmetric::Point3& d) {
    return relmetric::dot(relmetric::cross(b - a, c - a), d - a);
}

// Closed segment against closed triangle, general position assumed.
inline bool segment_triangle(const relmetric::Point3& p, const relmetric::Point3& q, const relmetric::Point3& a,
                             const relmetric::Point3& b, const relmetric::Point3& c) {
    double sp = orient3(a, b, c, p), sq = orient3(a, b, c, q);
    if ((sp > 0 && sq > 0) || (sp < 0 && sq < 0)) return false;
    double u = orient3(p, q, a, b), v = orient3(p, q, b, c), w = orient3(p, q, c, a);
    return (u >= 0 && v >= 0 && w >= 0) || (u <= 0 && v <= 0 && w <= 0);
}

}  // namespace oracles
