#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "textsnake/errors.hpp"

namespace textsnake {

/// Continuous pixel coordinate. Origin top-left, x rightward, y downward.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
    double dot(const Point2& o) const { return x * o.x + y * o.y; }
    double cross(const Point2& o) const { return x * o.y - y * o.x; }
};

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

/// Simple closed polygon. Vertices are stored in construction order; the
/// closing edge back to the first vertex is implicit. Orientation (sign of
/// the shoelace area in image coordinates) is recorded on construction.
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point2& operator[](std::size_t i) const { return vertices_[i]; }

    double signed_area() const { return signed_area_; }
    double area() const { return std::abs(signed_area_); }
    /// True when the shoelace sum is positive (counter-clockwise in a
    /// y-up frame; clockwise on screen with y pointing down).
    bool ccw() const { return signed_area_ > 0.0; }

private:
    std::vector<Point2> vertices_;
    double signed_area_ = 0.0;
};

/// Binary occupancy grid, one bit per pixel, row-major.
class PixelMask {
public:
    PixelMask() = default;
    PixelMask(int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }

    bool get(int row, int col) const {
        if (row < 0 || row >= height_ || col < 0 || col >= width_) return false;
        const std::size_t i = static_cast<std::size_t>(row) * width_ + col;
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(int row, int col, bool value = true) {
        const std::size_t i = static_cast<std::size_t>(row) * width_ + col;
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }

    /// True when the point (x, y) falls inside a set pixel square.
    bool contains_point(double x, double y) const {
        const int col = static_cast<int>(std::floor(x));
        const int row = static_cast<int>(std::floor(y));
        return get(row, col);
    }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool same_shape(const PixelMask& o) const {
        return height_ == o.height_ && width_ == o.width_;
    }
    bool operator==(const PixelMask& o) const {
        return same_shape(o) && words_ == o.words_;
    }

    PixelMask& operator&=(const PixelMask& o);
    PixelMask& operator|=(const PixelMask& o);

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Rotated rectangle, canonicalized so width >= height and `angle` is the
/// direction of the long side in [0, pi).
struct RotatedRect {
    Point2 center;
    double width = 0.0;
    double height = 0.0;
    double angle = 0.0;
};

/// One element of a snake: center, half-local-width radius and undirected
/// tangent orientation in [0, pi).
struct Disk {
    Point2 center;
    double radius = 0.0;
    double theta = 0.0;

    Disk() = default;
    Disk(Point2 c, double r, double t) : center(c), radius(r), theta(t) {}
};

/// Reduces an angle to the canonical undirected range [0, pi).
double canonical_angle(double theta);

/// Rasterizes `poly` onto an h x w grid. A pixel is set iff its center
/// (col + 0.5, row + 0.5) lies inside the polygon under the even-odd rule;
/// centers exactly on the boundary count as inside.
PixelMask rasterize_polygon(const Polygon& poly, int h, int w);

/// Even-odd point containment; points on the boundary count as inside.
bool point_in_polygon(const Polygon& poly, const Point2& pt);

/// |a & b| / |a | b|; 0 when both masks are empty.
double mask_iou(const PixelMask& a, const PixelMask& b);

/// Minimum-area enclosing rotated rectangle (rotating calipers over the
/// convex hull). A single point yields a zero-size rect at that point.
RotatedRect min_area_rect(const std::vector<Point2>& points);

/// Monotone-chain convex hull; collinear hull points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Direction of the total-least-squares line through `points`, modulo pi.
double fit_direction(const std::vector<Point2>& points);

/// Union of disk interiors rasterized onto an h x w grid: a pixel is set
/// iff its center lies within `radius` of some disk center. Disks with a
/// non-positive radius contribute nothing.
PixelMask disks_union_mask(const std::vector<Disk>& disks, int h, int w);

}  // namespace textsnake
