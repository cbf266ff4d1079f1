#pragma once

// Independent brute-force oracles used by the test suites. These mirror the
// contracts, not the implementations: keep them simple and slow.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "textsnake/geometry.hpp"

namespace oracles {

using textsnake::PixelMask;
using textsnake::Point2;
using textsnake::Polygon;

// Even-odd containment with boundary counted inside, evaluated per point.
inline bool point_in_polygon_ref(const std::vector<Point2>& v, double px, double py) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        const double cross = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
        const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
        if (cross * cross <= 1e-18 * std::max(len2, 1e-18)) {
            const double dot = (px - a.x) * (b.x - a.x) + (py - a.y) * (b.y - a.y);
            if (dot >= -1e-9 && dot <= len2 + 1e-9) return true;
        }
    }
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        if ((a.y <= py) != (b.y <= py)) {
            const double x = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
            if (x > px) inside = !inside;
        }
    }
    return inside;
}

inline PixelMask rasterize_ref(const Polygon& poly, int h, int w) {
    PixelMask mask(h, w);
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col)
            if (point_in_polygon_ref(poly.vertices(), col + 0.5, row + 0.5)) mask.set(row, col);
    return mask;
}

// Minimum axis-aligned bbox area over a 0.1 degree rotation sweep.
inline double min_rect_area_sweep(const std::vector<Point2>& pts) {
    double best = std::numeric_limits<double>::max();
    for (double deg = 0.0; deg < 180.0; deg += 0.1) {
        const double a = deg * std::numbers::pi / 180.0;
        const double c = std::cos(a), s = std::sin(a);
        double lo_x = std::numeric_limits<double>::max(), hi_x = std::numeric_limits<double>::lowest();
        double lo_y = lo_x, hi_y = hi_x;
        for (const Point2& p : pts) {
            const double x = c * p.x + s * p.y;
            const double y = -s * p.x + c * p.y;
            lo_x = std::min(lo_x, x);
            hi_x = std::max(hi_x, x);
            lo_y = std::min(lo_y, y);
            hi_y = std::max(hi_y, y);
        }
        best = std::min(best, (hi_x - lo_x) * (hi_y - lo_y));
    }
    return best;
}

// Direction minimizing the summed squared perpendicular distance, by sweep.
inline double fit_direction_sweep(const std::vector<Point2>& pts, double step_rad = 1e-3) {
    double cx = 0.0, cy = 0.0;
    for (const Point2& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= pts.size();
    cy /= pts.size();

    double best_sse = std::numeric_limits<double>::max();
    double best_theta = 0.0;
    for (double t = 0.0; t < std::numbers::pi; t += step_rad) {
        const double nx = -std::sin(t), ny = std::cos(t);  // normal of direction t
        double sse = 0.0;
        for (const Point2& p : pts) {
            const double d = (p.x - cx) * nx + (p.y - cy) * ny;
            sse += d * d;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_theta = t;
        }
    }
    return best_theta;
}

inline double angle_diff_mod_pi(double a, double b) {
    double d = std::fmod(std::abs(a - b), std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
}

// BFS flood fill into 8-connected components.
inline std::vector<std::set<std::pair<int, int>>> flood_fill_ref(const PixelMask& mask) {
    const int h = mask.height(), w = mask.width();
    std::vector<std::vector<bool>> seen(h, std::vector<bool>(w, false));
    std::vector<std::set<std::pair<int, int>>> comps;
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col) {
            if (!mask.get(row, col) || seen[row][col]) continue;
            std::set<std::pair<int, int>> comp;
            std::queue<std::pair<int, int>> q;
            q.push({row, col});
            seen[row][col] = true;
            while (!q.empty()) {
                const auto [r, c] = q.front();
                q.pop();
                comp.insert({r, c});
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = r + dr, nc = c + dc;
                        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                        if (!mask.get(nr, nc) || seen[nr][nc]) continue;
                        seen[nr][nc] = true;
                        q.push({nr, nc});
                    }
            }
            comps.push_back(std::move(comp));
        }
    return comps;
}

// Proper-crossing test for polygon simplicity (shared endpoints excluded).
inline bool polygon_simple_ref(const Polygon& poly) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Point2 &a = v[i], &b = v[(i + 1) % n];
            const Point2 &c = v[j], &d = v[(j + 1) % n];
            const double o1 = orient(a, b, c), o2 = orient(a, b, d);
            const double o3 = orient(c, d, a), o4 = orient(c, d, b);
            if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return false;
        }
    return true;
}

inline double dist_to_polyline(const Point2& p, const std::vector<Point2>& line) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const Point2 a = line[i], b = line[i + 1];
        const Point2 ab{b.x - a.x, b.y - a.y};
        const double len2 = ab.dot(ab);
        double t = len2 > 0.0 ? ((p - a).dot(ab) / len2) : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, textsnake::distance({a.x + ab.x * t, a.y + ab.y * t}, p));
    }
    if (line.size() == 1) best = std::min(best, textsnake::distance(line[0], p));
    return best;
}

}  // namespace oracles
