#include "textsnake/labelgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace textsnake {

namespace {

constexpr double kTieEps = 1e-6;
constexpr double kCoincideEps = 1e-9;

// M(e_{i,i+1}) = cos<e_{i+1,i+2}, e_{i-1,i}> with cyclic vertex indexing.
double edge_measurement(const std::vector<Point2>& v, std::size_t i) {
    const std::size_t n = v.size();
    const Point2 next = v[(i + 2) % n] - v[(i + 1) % n];
    const Point2 prev = v[i] - v[(i + n - 1) % n];
    const double nn = next.norm();
    const double np = prev.norm();
    if (nn < kCoincideEps || np < kCoincideEps) return 1.0;  // degenerate neighbours never win
    return next.dot(prev) / (nn * np);
}

double polyline_length(const std::vector<Point2>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
    return len;
}

// Arc-length-uniform resampling of a polyline, endpoints included.
std::vector<Point2> sample_polyline(const std::vector<Point2>& pts, int n_samples) {
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
    const double total = cum.back();

    std::vector<Point2> out;
    out.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double s = total * k / (n_samples - 1);
        auto it = std::lower_bound(cum.begin(), cum.end(), s);
        std::size_t j = static_cast<std::size_t>(it - cum.begin());
        if (j == 0) {
            out.push_back(pts.front());
            continue;
        }
        if (j >= pts.size()) {
            out.push_back(pts.back());
            continue;
        }
        const double seg = cum[j] - cum[j - 1];
        const double t = seg > 0.0 ? (s - cum[j - 1]) / seg : 0.0;
        out.push_back(pts[j - 1] + (pts[j] - pts[j - 1]) * t);
    }
    return out;
}

double window_theta(const std::vector<Point2>& centers, std::size_t i) {
    const std::size_t n = centers.size();
    const std::size_t window = std::min<std::size_t>(5, n);
    std::size_t start = i >= 2 ? i - 2 : 0;
    start = std::min(start, n - window);
    std::vector<Point2> pts(centers.begin() + start, centers.begin() + start + window);
    try {
        return fit_direction(pts);
    } catch (const DegenerateInput&) {
        const Point2 d = centers[std::min(i + 1, n - 1)] - centers[i >= 1 ? i - 1 : 0];
        if (d.norm() < kCoincideEps) return 0.0;
        return canonical_angle(std::atan2(d.y, d.x));
    }
}

}  // namespace

double SnakeDescriptor::axis_length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < disks.size(); ++i)
        len += distance(disks[i - 1].center, disks[i].center);
    return len;
}

std::pair<std::size_t, std::size_t> edge_head_tail(const Polygon& poly) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    if (n < 4) throw UnsupportedPolygon("head/tail detection needs >= 4 vertices");

    std::vector<double> m(n), len(n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = edge_measurement(v, i);
        len[i] = distance(v[i], v[(i + 1) % n]);
    }

    auto adjacent = [n](std::size_t i, std::size_t j) {
        return (i + 1) % n == j || (j + 1) % n == i;
    };

    double best_sum = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!adjacent(i, j)) best_sum = std::min(best_sum, m[i] + m[j]);
    if (best_sum == std::numeric_limits<double>::max())
        throw ForkedInstance("no non-adjacent head/tail edge pair");

    bool found = false;
    std::size_t bi = 0, bj = 0;
    double best_len = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacent(i, j)) continue;
            if (m[i] + m[j] > best_sum + kTieEps) continue;
            const double total = len[i] + len[j];
            if (!found || total < best_len - kTieEps) {
                found = true;
                best_len = total;
                bi = i;
                bj = j;
            }
        }
    }
    return {bi, bj};
}

std::pair<Point2, Point2> axis_endpoints(const Polygon& poly) {
    const auto [head, tail] = edge_head_tail(poly);
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    const Point2 hm = (v[head] + v[(head + 1) % n]) * 0.5;
    const Point2 tm = (v[tail] + v[(tail + 1) % n]) * 0.5;
    return {hm, tm};
}

SnakeDescriptor extract_snake(const AnnotatedInstance& instance, const SnakeParams& params) {
    const Polygon& poly = instance.polygon;
    const auto [head, tail] = edge_head_tail(poly);
    const auto& v = poly.vertices();
    const std::size_t n = v.size();

    // Sideline A runs from the end of the head edge to the start of the tail
    // edge; sideline B covers the rest and is reversed so both run head->tail.
    std::vector<Point2> side_a, side_b;
    for (std::size_t i = (head + 1) % n;; i = (i + 1) % n) {
        side_a.push_back(v[i]);
        if (i == tail) break;
    }
    for (std::size_t i = (tail + 1) % n;; i = (i + 1) % n) {
        side_b.push_back(v[i]);
        if (i == head) break;
    }
    std::reverse(side_b.begin(), side_b.end());

    int n_samples = params.n_samples;
    if (params.adaptive_samples) {
        const double mean_len = 0.5 * (polyline_length(side_a) + polyline_length(side_b));
        n_samples = std::clamp(static_cast<int>(std::lround(mean_len / 2.0)), 8, 128);
    }
    if (n_samples < 2) throw InvalidArgument("extract_snake: n_samples must be >= 2");

    const std::vector<Point2> anchors_a = sample_polyline(side_a, n_samples);
    const std::vector<Point2> anchors_b = sample_polyline(side_b, n_samples);

    std::vector<Point2> centers;
    std::vector<double> radii;
    centers.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double width = distance(anchors_a[k], anchors_b[k]);
        if (width < kCoincideEps)
            throw DegenerateWidth("paired anchor points coincide");
        const Point2 c = (anchors_a[k] + anchors_b[k]) * 0.5;
        if (!centers.empty() && distance(centers.back(), c) < kCoincideEps) continue;
        centers.push_back(c);
        radii.push_back(width / 2.0);
    }
    if (centers.empty()) throw DegenerateWidth("no usable axis samples");

    std::vector<double> thetas(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) thetas[i] = window_theta(centers, i);

    // Trim both ends by half the end radius of arc length; keep at least the
    // middle disk when the trim would consume everything.
    std::vector<double> arc(centers.size(), 0.0);
    for (std::size_t i = 1; i < centers.size(); ++i)
        arc[i] = arc[i - 1] + distance(centers[i - 1], centers[i]);
    const double total = arc.back();
    const double trim_head = radii.front() / 2.0;
    const double trim_tail = radii.back() / 2.0;

    SnakeDescriptor snake;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (arc[i] < trim_head || arc[i] > total - trim_tail) continue;
        snake.disks.emplace_back(centers[i], radii[i], thetas[i]);
    }
    if (snake.disks.empty()) {
        const std::size_t mid = centers.size() / 2;
        snake.disks.emplace_back(centers[mid], radii[mid], thetas[mid]);
    }
    snake.source_polygon = poly;
    return snake;
}

namespace {

// Disks of radius r/5 swept densely along the axis polyline.
std::vector<Disk> tcl_band_disks(const SnakeDescriptor& snake) {
    const auto& d = snake.disks;
    std::vector<Disk> dense;
    if (d.empty()) return dense;
    dense.emplace_back(d[0].center, d[0].radius / 5.0, d[0].theta);
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double seg = distance(d[i - 1].center, d[i].center);
        const int steps = std::max(1, static_cast<int>(std::ceil(seg / 0.5)));
        for (int k = 1; k <= steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            const Point2 c = d[i - 1].center + (d[i].center - d[i - 1].center) * t;
            const double r = d[i - 1].radius + (d[i].radius - d[i - 1].radius) * t;
            dense.emplace_back(c, r / 5.0, 0.0);
        }
    }
    return dense;
}

void clear_cap(PixelMask& band, const Point2& endpoint, double radius) {
    if (radius <= 0.0) return;
    const int h = band.height();
    const int w = band.width();
    const int row_lo = std::max(0, static_cast<int>(std::floor(endpoint.y - radius - 0.5)));
    const int row_hi = std::min(h - 1, static_cast<int>(std::ceil(endpoint.y + radius)));
    const int col_lo = std::max(0, static_cast<int>(std::floor(endpoint.x - radius - 0.5)));
    const int col_hi = std::min(w - 1, static_cast<int>(std::ceil(endpoint.x + radius)));
    const double r2 = radius * radius;
    for (int row = row_lo; row <= row_hi; ++row)
        for (int col = col_lo; col <= col_hi; ++col) {
            const double dx = (col + 0.5) - endpoint.x;
            const double dy = (row + 0.5) - endpoint.y;
            if (dx * dx + dy * dy < r2) band.set(row, col, false);
        }
}

}  // namespace

GeometryMaps render_label_maps(const std::vector<SnakeDescriptor>& snakes,
                               const std::vector<Polygon>& masks, int h, int w) {
    GeometryMaps maps(h, w);

    PixelMask tr_mask(h, w);
    for (const Polygon& poly : masks) tr_mask |= rasterize_polygon(poly, h, w);

    PixelMask tcl_mask(h, w);
    for (const SnakeDescriptor& snake : snakes) {
        if (snake.disks.empty()) continue;
        PixelMask band = disks_union_mask(tcl_band_disks(snake), h, w);
        band &= tr_mask;
        if (snake.source_polygon) {
            // The trimmed axis starts half an end radius from the head/tail
            // edge midpoints; the r/5 sweep must not reach back past that.
            // The untrimmed end radius is half the cap edge length.
            const Polygon& poly = *snake.source_polygon;
            const auto [head, tail] = edge_head_tail(poly);
            const auto& pv = poly.vertices();
            const std::size_t pn = pv.size();
            const Point2 hm = (pv[head] + pv[(head + 1) % pn]) * 0.5;
            const Point2 tm = (pv[tail] + pv[(tail + 1) % pn]) * 0.5;
            const double r_head = distance(pv[head], pv[(head + 1) % pn]) / 2.0;
            const double r_tail = distance(pv[tail], pv[(tail + 1) % pn]) / 2.0;
            clear_cap(band, hm, r_head / 2.0 - 1.0);
            clear_cap(band, tm, r_tail / 2.0 - 1.0);
        }
        tcl_mask |= band;
    }

    std::vector<Disk> all_disks;
    for (const SnakeDescriptor& snake : snakes)
        all_disks.insert(all_disks.end(), snake.disks.begin(), snake.disks.end());

    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const std::size_t i = maps.index(row, col);
            if (tr_mask.get(row, col)) maps.tr[i] = 1.0f;
            if (!tcl_mask.get(row, col)) continue;
            maps.tcl[i] = 1.0f;

            const Point2 p{col + 0.5, row + 0.5};
            double best = std::numeric_limits<double>::max();
            const Disk* nearest = nullptr;
            for (const Disk& d : all_disks) {
                const double dist2 = (d.center - p).dot(d.center - p);
                if (dist2 < best) {
                    best = dist2;
                    nearest = &d;
                }
            }
            if (nearest != nullptr) {
                maps.r[i] = static_cast<float>(nearest->radius);
                maps.cos_t[i] = static_cast<float>(std::cos(nearest->theta));
                maps.sin_t[i] = static_cast<float>(std::sin(nearest->theta));
            }
        }
    }
    return maps;
}

PixelMask render_ignore_mask(const std::vector<Polygon>& ignore_polys, int h, int w) {
    PixelMask mask(h, w);
    for (const Polygon& poly : ignore_polys) {
        try {
            mask |= rasterize_polygon(poly, h, w);
        } catch (const DegeneratePolygon&) {
            // Degenerate don't-care region: nothing to mask out.
        }
    }
    return mask;
}

}  // namespace textsnake
