#include "textsnake/geometry.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numbers>

namespace textsnake {

namespace {
constexpr double kBoundaryEps = 1e-9;
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    double sum = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices_[i];
        const Point2& b = vertices_[(i + 1) % n];
        sum += a.cross(b);
    }
    signed_area_ = 0.5 * sum;
}

PixelMask::PixelMask(int height, int width) : height_(height), width_(width) {
    if (height <= 0 || width <= 0)
        throw DimensionMismatch("mask dimensions must be positive");
    words_.assign((static_cast<std::size_t>(height) * width + 63) / 64, 0);
}

std::size_t PixelMask::count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
}

PixelMask& PixelMask::operator&=(const PixelMask& o) {
    if (!same_shape(o)) throw DimensionMismatch("mask shapes differ");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

PixelMask& PixelMask::operator|=(const PixelMask& o) {
    if (!same_shape(o)) throw DimensionMismatch("mask shapes differ");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

double canonical_angle(double theta) {
    const double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t < 0.0) t += pi;
    if (t >= pi) t = 0.0;
    return t;
}

namespace {

bool point_on_segment(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const Point2 ap = p - a;
    const double len2 = ab.dot(ab);
    if (len2 == 0.0) return distance(p, a) <= kBoundaryEps;
    const double cross = ab.cross(ap);
    if (cross * cross > kBoundaryEps * kBoundaryEps * len2) return false;
    const double t = ap.dot(ab) / len2;
    return t >= -kBoundaryEps && t <= 1.0 + kBoundaryEps;
}

}  // namespace

bool point_in_polygon(const Polygon& poly, const Point2& pt) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        if (point_on_segment(pt, a, b)) return true;
        const bool crosses = (a.y <= pt.y) != (b.y <= pt.y);
        if (crosses) {
            const double x = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (x > pt.x) inside = !inside;
        }
    }
    return inside;
}

PixelMask rasterize_polygon(const Polygon& poly, int h, int w) {
    if (h <= 0 || w <= 0) throw DimensionMismatch("grid dimensions must be positive");
    if (poly.size() < 3 || poly.area() <= kBoundaryEps)
        throw DegeneratePolygon("polygon needs >= 3 vertices and nonzero area");

    const auto& v = poly.vertices();
    const std::size_t n = v.size();

    double min_x = std::numeric_limits<double>::max(), max_x = std::numeric_limits<double>::lowest();
    double min_y = min_x, max_y = max_x;
    for (const Point2& p : v) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }

    const int row_lo = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    const int row_hi = std::min(h - 1, static_cast<int>(std::ceil(max_y)));
    const int col_lo = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    const int col_hi = std::min(w - 1, static_cast<int>(std::ceil(max_x)));

    PixelMask mask(h, w);
    if (row_lo > row_hi || col_lo > col_hi) return mask;

    std::vector<double> crossings;
    std::vector<std::pair<double, double>> boundary_spans;  // horizontal edges on this row
    std::vector<double> boundary_points;                    // vertices on this row

    for (int row = row_lo; row <= row_hi; ++row) {
        const double y = row + 0.5;
        crossings.clear();
        boundary_spans.clear();
        boundary_points.clear();

        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = v[i];
            const Point2& b = v[(i + 1) % n];
            if (std::abs(a.y - y) <= kBoundaryEps && std::abs(b.y - y) <= kBoundaryEps) {
                boundary_spans.emplace_back(std::min(a.x, b.x), std::max(a.x, b.x));
                continue;
            }
            if (std::abs(a.y - y) <= kBoundaryEps) boundary_points.push_back(a.x);
            const bool crosses = (a.y <= y) != (b.y <= y);
            if (crosses)
                crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(crossings.begin(), crossings.end());

        for (int col = col_lo; col <= col_hi; ++col) {
            const double x = col + 0.5;
            // Parity of crossings strictly left of the pixel center.
            auto it = std::lower_bound(crossings.begin(), crossings.end(), x - kBoundaryEps);
            bool inside = ((it - crossings.begin()) & 1) != 0;
            if (!inside) {
                // Center exactly on a crossing, a horizontal edge, or a vertex.
                if (it != crossings.end() && *it <= x + kBoundaryEps) inside = true;
                if (!inside)
                    for (const auto& [lo, hi] : boundary_spans)
                        if (x >= lo - kBoundaryEps && x <= hi + kBoundaryEps) { inside = true; break; }
                if (!inside)
                    for (double bx : boundary_points)
                        if (std::abs(bx - x) <= kBoundaryEps) { inside = true; break; }
            }
            if (inside) mask.set(row, col);
        }
    }
    return mask;
}

double mask_iou(const PixelMask& a, const PixelMask& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("mask_iou: shapes differ");
    std::size_t inter = 0, uni = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        inter += std::popcount(wa[i] & wb[i]);
        uni += std::popcount(wa[i] | wb[i]);
    }
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;

    auto turn = [](const Point2& o, const Point2& a, const Point2& b) {
        return (a - o).cross(b - o);
    };

    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

RotatedRect min_area_rect(const std::vector<Point2>& points) {
    if (points.empty()) throw EmptyInput("min_area_rect: no points");

    const std::vector<Point2> hull = convex_hull(points);
    const double pi = std::numbers::pi;

    if (hull.size() == 1) return {hull[0], 0.0, 0.0, 0.0};
    if (hull.size() == 2) {
        // Collinear input: a zero-height rect along the extent.
        const Point2 d = hull[1] - hull[0];
        RotatedRect r;
        r.center = {(hull[0].x + hull[1].x) / 2, (hull[0].y + hull[1].y) / 2};
        r.width = d.norm();
        r.height = 0.0;
        r.angle = canonical_angle(std::atan2(d.y, d.x));
        return r;
    }

    double best_area = std::numeric_limits<double>::max();
    RotatedRect best;
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e = hull[(i + 1) % n] - hull[i];
        const double len = e.norm();
        if (len == 0.0) continue;
        const Point2 d{e.x / len, e.y / len};
        const Point2 nrm{-d.y, d.x};

        double lo_d = std::numeric_limits<double>::max(), hi_d = std::numeric_limits<double>::lowest();
        double lo_n = lo_d, hi_n = hi_d;
        for (const Point2& p : hull) {
            const double pd = p.dot(d);
            const double pn = p.dot(nrm);
            lo_d = std::min(lo_d, pd);
            hi_d = std::max(hi_d, pd);
            lo_n = std::min(lo_n, pn);
            hi_n = std::max(hi_n, pn);
        }
        const double wd = hi_d - lo_d;
        const double hn = hi_n - lo_n;
        const double area = wd * hn;
        if (area < best_area) {
            best_area = area;
            const double cd = (lo_d + hi_d) / 2;
            const double cn = (lo_n + hi_n) / 2;
            best.center = {d.x * cd + nrm.x * cn, d.y * cd + nrm.y * cn};
            if (wd >= hn) {
                best.width = wd;
                best.height = hn;
                best.angle = canonical_angle(std::atan2(d.y, d.x));
            } else {
                best.width = hn;
                best.height = wd;
                best.angle = canonical_angle(std::atan2(d.y, d.x) + pi / 2);
            }
        }
    }
    return best;
}

double fit_direction(const std::vector<Point2>& points) {
    if (points.size() < 2) throw DegenerateInput("fit_direction: need >= 2 points");

    double cx = 0.0, cy = 0.0;
    for (const Point2& p : points) { cx += p.x; cy += p.y; }
    cx /= points.size();
    cy /= points.size();

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const Point2& p : points) {
        const double dx = p.x - cx;
        const double dy = p.y - cy;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx + syy <= 1e-18) throw DegenerateInput("fit_direction: points coincide");

    // Principal direction of the scatter matrix.
    return canonical_angle(0.5 * std::atan2(2.0 * sxy, sxx - syy));
}

PixelMask disks_union_mask(const std::vector<Disk>& disks, int h, int w) {
    if (h <= 0 || w <= 0) throw DimensionMismatch("grid dimensions must be positive");
    PixelMask mask(h, w);
    for (const Disk& d : disks) {
        if (!(d.radius > 0.0)) continue;
        const double r = d.radius;
        const int row_lo = std::max(0, static_cast<int>(std::floor(d.center.y - r - 0.5)));
        const int row_hi = std::min(h - 1, static_cast<int>(std::ceil(d.center.y + r)));
        const int col_lo = std::max(0, static_cast<int>(std::floor(d.center.x - r - 0.5)));
        const int col_hi = std::min(w - 1, static_cast<int>(std::ceil(d.center.x + r)));
        const double r2 = r * r;
        for (int row = row_lo; row <= row_hi; ++row) {
            const double dy = (row + 0.5) - d.center.y;
            for (int col = col_lo; col <= col_hi; ++col) {
                const double dx = (col + 0.5) - d.center.x;
                if (dx * dx + dy * dy <= r2) mask.set(row, col);
            }
        }
    }
    return mask;
}

}  // namespace textsnake
