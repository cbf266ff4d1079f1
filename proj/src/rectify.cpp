#include "textsnake/rectify.hpp"

#include <algorithm>
#include <cmath>

namespace textsnake {

namespace {

double bilinear_sample(const RasterImage& img, double x, double y, int ch) {
    // Sample in pixel-center coordinates, clamped to the border.
    const double fx = std::clamp(x - 0.5, 0.0, static_cast<double>(img.width - 1));
    const double fy = std::clamp(y - 0.5, 0.0, static_cast<double>(img.height - 1));
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double tx = fx - x0;
    const double ty = fy - y0;
    const double top = img.at(y0, x0, ch) * (1.0 - tx) + img.at(y0, x1, ch) * tx;
    const double bot = img.at(y1, x0, ch) * (1.0 - tx) + img.at(y1, x1, ch) * tx;
    return top * (1.0 - ty) + bot * ty;
}

Point2 unit_or(const Point2& v, const Point2& fallback) {
    const double n = v.norm();
    if (n < 1e-12) return fallback;
    return {v.x / n, v.y / n};
}

}  // namespace

RasterImage rectify_instance(const RasterImage& img, const SnakeDescriptor& snake) {
    const auto& disks = snake.disks;
    if (disks.size() < 2) throw DegenerateSnake("rectify needs >= 2 disks");

    const std::size_t n = disks.size();
    std::vector<double> arc(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        arc[i] = arc[i - 1] + distance(disks[i - 1].center, disks[i].center);
    const double total = arc.back();
    if (total < 1e-9) throw DegenerateSnake("rectify: axis has zero length");

    std::vector<double> radii(n);
    for (std::size_t i = 0; i < n; ++i) radii[i] = disks[i].radius;
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    const double median_r = sorted.size() % 2 == 1
                                ? sorted[sorted.size() / 2]
                                : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);

    const int out_w = std::max(1, static_cast<int>(std::lround(total)));
    const int out_h = std::max(2, static_cast<int>(std::lround(2.0 * median_r)));

    // Axis normals from central differences on the polyline.
    std::vector<Point2> normals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& prev = disks[i > 0 ? i - 1 : 0].center;
        const Point2& next = disks[std::min(i + 1, n - 1)].center;
        const Point2 tangent = unit_or(next - prev, {1.0, 0.0});
        normals[i] = {-tangent.y, tangent.x};
    }

    RasterImage out(out_w, out_h, img.channels);
    for (int col = 0; col < out_w; ++col) {
        const double s = (col + 0.5) / out_w * total;
        auto it = std::lower_bound(arc.begin(), arc.end(), s);
        std::size_t j = static_cast<std::size_t>(it - arc.begin());
        j = std::clamp<std::size_t>(j, 1, n - 1);
        const double seg = arc[j] - arc[j - 1];
        const double t = seg > 0.0 ? (s - arc[j - 1]) / seg : 0.0;

        for (int row = 0; row < out_h; ++row) {
            const double v = (row + 0.5) / out_h;  // 0 = top edge (center - r*n)
            const Point2 top_a = disks[j - 1].center - normals[j - 1] * disks[j - 1].radius;
            const Point2 bot_a = disks[j - 1].center + normals[j - 1] * disks[j - 1].radius;
            const Point2 top_b = disks[j].center - normals[j] * disks[j].radius;
            const Point2 bot_b = disks[j].center + normals[j] * disks[j].radius;
            const Point2 top = top_a + (top_b - top_a) * t;
            const Point2 bot = bot_a + (bot_b - bot_a) * t;
            const Point2 src = top + (bot - top) * v;
            for (int ch = 0; ch < img.channels; ++ch) {
                const double value = bilinear_sample(img, src.x, src.y, ch);
                out.at(row, col, ch) = static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 255.0)));
            }
        }
    }
    return out;
}

}  // namespace textsnake
