#include "textsnake/render.hpp"

#include <algorithm>
#include <cmath>

namespace textsnake {

namespace {

void put_pixel(RasterImage& img, int row, int col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (row < 0 || row >= img.height || col < 0 || col >= img.width) return;
    img.at(row, col, 0) = r;
    img.at(row, col, 1) = g;
    img.at(row, col, 2) = b;
}

void draw_segment(RasterImage& img, const Point2& a, const Point2& b, std::uint8_t r,
                  std::uint8_t g, std::uint8_t bl) {
    const double len = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.25)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const Point2 p = a + (b - a) * t;
        put_pixel(img, static_cast<int>(std::floor(p.y)), static_cast<int>(std::floor(p.x)), r, g, bl);
    }
}

}  // namespace

void draw_polyline(RasterImage& img, const std::vector<Point2>& pts, bool closed, std::uint8_t r,
                   std::uint8_t g, std::uint8_t b) {
    if (pts.size() < 2) {
        if (pts.size() == 1)
            put_pixel(img, static_cast<int>(std::floor(pts[0].y)),
                      static_cast<int>(std::floor(pts[0].x)), r, g, b);
        return;
    }
    for (std::size_t i = 1; i < pts.size(); ++i) draw_segment(img, pts[i - 1], pts[i], r, g, b);
    if (closed) draw_segment(img, pts.back(), pts.front(), r, g, b);
}

RasterImage render_overlay(const RasterImage& img, const std::vector<Detection>& dets,
                           const std::vector<AnnotatedInstance>& gts) {
    RasterImage out(img.width, img.height, 3);
    for (int row = 0; row < img.height; ++row)
        for (int col = 0; col < img.width; ++col)
            for (int ch = 0; ch < 3; ++ch)
                out.at(row, col, ch) = img.channels == 3 ? img.at(row, col, ch) : img.at(row, col, 0);

    for (const AnnotatedInstance& gt : gts)
        draw_polyline(out, gt.polygon.vertices(), true, 0, 255, 0);
    for (const Detection& det : dets) {
        draw_polyline(out, det.boundary.vertices(), true, 255, 255, 0);
        std::vector<Point2> axis;
        axis.reserve(det.snake.disks.size());
        for (const Disk& d : det.snake.disks) axis.push_back(d.center);
        draw_polyline(out, axis, false, 255, 0, 0);
    }
    return out;
}

}  // namespace textsnake
