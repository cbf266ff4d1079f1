#include "textsnake/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace textsnake {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

}  // namespace

std::vector<TclComponent> segment_instances(const PixelMask& tcl_mask) {
    const int h = tcl_mask.height();
    const int w = tcl_mask.width();
    if (h == 0 || w == 0) return {};

    std::vector<std::int32_t> idx(static_cast<std::size_t>(h) * w, -1);
    std::vector<std::pair<int, int>> coords;
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col)
            if (tcl_mask.get(row, col)) {
                idx[static_cast<std::size_t>(row) * w + col] =
                    static_cast<std::int32_t>(coords.size());
                coords.emplace_back(row, col);
            }
    if (coords.empty()) return {};

    UnionFind uf(coords.size());
    const int offsets[4][2] = {{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};  // W, NW, N, NE
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto [row, col] = coords[i];
        for (const auto& off : offsets) {
            const int nr = row + off[0];
            const int nc = col + off[1];
            if (nr < 0 || nc < 0 || nc >= w) continue;
            const std::int32_t j = idx[static_cast<std::size_t>(nr) * w + nc];
            if (j >= 0) uf.unite(i, static_cast<std::size_t>(j));
        }
    }

    std::vector<std::int32_t> slot(coords.size(), -1);
    std::vector<TclComponent> comps;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::size_t root = uf.find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::int32_t>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<std::size_t>(slot[root])].pixels.push_back(coords[i]);
    }

    auto order_key = [](const TclComponent& c) {
        int min_row = c.pixels.front().first;  // scan order: first pixel has min row
        int min_col = std::numeric_limits<int>::max();
        for (const auto& [row, col] : c.pixels) min_col = std::min(min_col, col);
        return std::make_pair(min_row, min_col);
    };
    std::sort(comps.begin(), comps.end(), [&](const TclComponent& a, const TclComponent& b) {
        return order_key(a) < order_key(b);
    });
    for (std::size_t i = 0; i < comps.size(); ++i) comps[i].id = static_cast<int>(i);
    return comps;
}

namespace {

// Last in-mask point along `dir` from `start`, walking 0.5 px steps up to
// `max_walk`, with the exit crossing refined by bisection.
Point2 walk_exit(const Point2& start, const Point2& dir, double max_walk, const PixelMask& mask) {
    double t_in = 0.0;
    double t_out = -1.0;
    for (double t = 0.5; t <= max_walk + 1e-12; t += 0.5) {
        if (mask.contains_point(start.x + dir.x * t, start.y + dir.y * t)) {
            t_in = t;
        } else {
            t_out = t;
            break;
        }
    }
    if (t_out < 0.0) return {start.x + dir.x * t_in, start.y + dir.y * t_in};

    double lo = t_in, hi = t_out;
    for (int i = 0; i < 25; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mask.contains_point(start.x + dir.x * mid, start.y + dir.y * mid))
            lo = mid;
        else
            hi = mid;
    }
    const double t_exit = 0.5 * (lo + hi);
    return {start.x + dir.x * t_exit, start.y + dir.y * t_exit};
}

}  // namespace

Point2 centralize(const Point2& pt, const GeometryMaps& maps, const PixelMask& tcl_mask) {
    if (!tcl_mask.contains_point(pt.x, pt.y))
        throw OffComponent("centralize: point not on the TCL mask");

    double c = 1.0, s = 0.0;
    maps.direction_at(pt.x, pt.y, c, s);
    const Point2 normal{-s, c};
    const double max_walk = 2.0 * maps.r_at(pt.x, pt.y) + 2.0;

    const Point2 exit_a = walk_exit(pt, normal, max_walk, tcl_mask);
    const Point2 exit_b = walk_exit(pt, normal * -1.0, max_walk, tcl_mask);
    return (exit_a + exit_b) * 0.5;
}

std::optional<Point2> stride_step(const Point2& pt, const GeometryMaps& maps,
                                  const PixelMask& tcl_mask, int sign,
                                  const std::optional<Point2>& ref_dir) {
    if (!tcl_mask.contains_point(pt.x, pt.y))
        throw OffComponent("stride_step: point not on the TCL mask");

    double c = 1.0, s = 0.0;
    maps.direction_at(pt.x, pt.y, c, s);
    Point2 tangent{c, s};
    if (ref_dir && tangent.dot(*ref_dir) < 0.0) tangent = tangent * -1.0;

    const double base = maps.r_at(pt.x, pt.y) / 2.0;
    double prev_len = -1.0;
    for (int k = 0; k <= 6; ++k) {
        double len = base / static_cast<double>(1 << k);
        if (k > 0) len = std::min(std::max(len, 1.0), base);  // decrement floor: 1 px
        if (len == prev_len) break;
        prev_len = len;
        const Point2 cand = pt + tangent * (sign * len);
        if (tcl_mask.contains_point(cand.x, cand.y)) return cand;
    }
    return std::nullopt;
}

namespace {

AxisPoint sample_axis_point(const Point2& p, const GeometryMaps& maps) {
    double c = 1.0, s = 0.0;
    maps.direction_at(p.x, p.y, c, s);
    return {p, maps.r_at(p.x, p.y), canonical_angle(std::atan2(s, c))};
}

long long quantize_key(const Point2& p, int w) {
    const long long qx = std::llround(p.x);
    const long long qy = std::llround(p.y);
    return qy * (static_cast<long long>(w) + 2) + qx;
}

}  // namespace

std::vector<AxisPoint> trace_axis(const TclComponent& comp, const GeometryMaps& maps,
                                  const PixelMask& tcl_mask,
                                  const std::optional<std::pair<int, int>>& seed_override) {
    if (comp.pixels.empty()) return {};

    // Restrict the walk to this component so strides cannot hop instances.
    PixelMask cmask(tcl_mask.height(), tcl_mask.width());
    for (const auto& [row, col] : comp.pixels)
        if (tcl_mask.get(row, col)) cmask.set(row, col);

    std::pair<int, int> seed_px;
    if (seed_override) {
        seed_px = *seed_override;
        if (!cmask.get(seed_px.first, seed_px.second))
            throw OffComponent("trace_axis: seed pixel not in component");
    } else {
        double cy = 0.0, cx = 0.0;
        for (const auto& [row, col] : comp.pixels) {
            cy += row + 0.5;
            cx += col + 0.5;
        }
        cy /= comp.pixels.size();
        cx /= comp.pixels.size();
        double best = std::numeric_limits<double>::max();
        seed_px = comp.pixels.front();
        for (const auto& px : comp.pixels) {  // scan order breaks ties by (row, col)
            const double dy = px.first + 0.5 - cy;
            const double dx = px.second + 0.5 - cx;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                seed_px = px;
            }
        }
    }

    Point2 seed{seed_px.second + 0.5, seed_px.first + 0.5};
    Point2 centered_seed = centralize(seed, maps, cmask);
    if (!cmask.contains_point(centered_seed.x, centered_seed.y)) centered_seed = seed;

    const std::size_t max_steps = 4 * comp.pixels.size();
    const int w = tcl_mask.width();

    auto walk = [&](int sign) {
        std::vector<AxisPoint> out;
        std::unordered_set<long long> visited;
        visited.insert(quantize_key(centered_seed, w));
        Point2 cur = centered_seed;
        std::optional<Point2> ref;
        for (std::size_t step = 0; step < max_steps; ++step) {
            const auto next = stride_step(cur, maps, cmask, sign, ref);
            if (!next) break;
            Point2 centered = centralize(*next, maps, cmask);
            if (!cmask.contains_point(centered.x, centered.y)) centered = *next;
            const long long key = quantize_key(centered, w);
            if (visited.count(key)) break;
            visited.insert(key);
            const Point2 disp = centered - cur;
            if (disp.norm() > 1e-9) ref = disp * (1.0 / disp.norm() * sign);
            out.push_back(sample_axis_point(centered, maps));
            cur = centered;
        }
        return out;
    };

    const std::vector<AxisPoint> forward = walk(+1);
    const std::vector<AxisPoint> backward = walk(-1);

    std::vector<AxisPoint> axis;
    axis.reserve(forward.size() + backward.size() + 1);
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) axis.push_back(*it);
    axis.push_back(sample_axis_point(centered_seed, maps));
    axis.insert(axis.end(), forward.begin(), forward.end());
    return axis;
}

std::pair<SnakeDescriptor, PixelMask> reconstruct(const std::vector<AxisPoint>& axis, int h, int w) {
    if (axis.empty()) throw EmptyAxis("reconstruct: empty axis");
    SnakeDescriptor snake;
    snake.disks.reserve(axis.size());
    for (const AxisPoint& ap : axis) snake.disks.emplace_back(ap.pt, ap.r, ap.theta);
    PixelMask region = disks_union_mask(snake.disks, h, w);
    return {std::move(snake), std::move(region)};
}

std::vector<Detection> filter_candidates(std::vector<Detection> cands,
                                         const std::vector<TclComponent>& comps,
                                         const GeometryMaps& maps, const PostprocParams& params) {
    std::vector<Detection> kept;
    const std::size_t n = std::min(cands.size(), comps.size());
    for (std::size_t i = 0; i < n; ++i) {
        const TclComponent& comp = comps[i];
        Detection& det = cands[i];

        double mean_r = 0.0;
        for (const auto& [row, col] : comp.pixels) mean_r += maps.r[maps.index(row, col)];
        if (!comp.pixels.empty()) mean_r /= comp.pixels.size();
        if (static_cast<double>(comp.pixels.size()) < params.tcl_count_factor * mean_r) continue;

        std::size_t region_count = 0, tr_count = 0;
        for (int row = 0; row < det.region.height(); ++row)
            for (int col = 0; col < det.region.width(); ++col)
                if (det.region.get(row, col)) {
                    ++region_count;
                    if (maps.tr[maps.index(row, col)] >= params.t_tr) ++tr_count;
                }
        if (region_count == 0) continue;
        if (static_cast<double>(tr_count) / region_count < params.tr_overlap_min) continue;

        if (params.icdar_filters) {
            const RotatedRect rect = min_area_rect(det.boundary.vertices());
            if (rect.height < params.min_side_px) continue;
            if (static_cast<double>(region_count) < params.min_area_px) continue;
        }
        kept.push_back(std::move(det));
    }
    return kept;
}

std::vector<Detection> detect(const GeometryMaps& maps, const PostprocParams& params) {
    const BinarizedMaps bin = binarize(maps, params.t_tr, params.t_tcl);
    const std::vector<TclComponent> comps = segment_instances(bin.tcl_mask);

    std::vector<Detection> cands;
    cands.reserve(comps.size());
    for (const TclComponent& comp : comps) {
        const std::vector<AxisPoint> axis = trace_axis(comp, maps, bin.tcl_mask);
        auto [snake, region] = reconstruct(axis, maps.height(), maps.width());

        Detection det;
        det.snake = std::move(snake);
        det.boundary = trace_boundary(region);

        double score = 0.0;
        std::size_t count = 0;
        for (int row = 0; row < region.height(); ++row)
            for (int col = 0; col < region.width(); ++col)
                if (region.get(row, col)) {
                    score += maps.tr[maps.index(row, col)];
                    ++count;
                }
        det.score = count > 0 ? score / count : 0.0;
        det.region = std::move(region);
        cands.push_back(std::move(det));
    }
    return filter_candidates(std::move(cands), comps, maps, params);
}

Polygon trace_boundary(const PixelMask& mask) {
    const int h = mask.height();
    const int w = mask.width();

    int r0 = -1, c0 = -1;
    for (int row = 0; row < h && r0 < 0; ++row)
        for (int col = 0; col < w; ++col)
            if (mask.get(row, col)) {
                r0 = row;
                c0 = col;
                break;
            }
    if (r0 < 0) return Polygon{};

    // Crack following on the pixel-corner lattice, region kept on the right
    // of the travel direction. Saddles resolve with a left turn, matching
    // 8-connected components.
    const int dirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // R, D, L, U
    auto valid = [&](int x, int y, int dir) {
        const bool tl = mask.get(y - 1, x - 1);
        const bool tr = mask.get(y - 1, x);
        const bool bl = mask.get(y, x - 1);
        const bool br = mask.get(y, x);
        switch (dir) {
            case 0: return br && !tr;  // R
            case 1: return bl && !br;  // D
            case 2: return tl && !bl;  // L
            default: return tr && !tl;  // U
        }
    };

    const int start_x = c0, start_y = r0;
    int x = start_x, y = start_y;
    int dir = 0;  // moving right along the top edge of the start pixel

    std::vector<Point2> corners;
    const std::size_t max_iter = 4 * static_cast<std::size_t>(h) * w + 8;
    std::size_t iter = 0;
    do {
        x += dirs[dir][0];
        y += dirs[dir][1];
        // Turn preference: left, straight, right, back.
        const int left = (dir + 3) % 4;
        const int right = (dir + 1) % 4;
        int next_dir;
        if (valid(x, y, left))
            next_dir = left;
        else if (valid(x, y, dir))
            next_dir = dir;
        else if (valid(x, y, right))
            next_dir = right;
        else
            next_dir = (dir + 2) % 4;
        if (next_dir != dir) corners.emplace_back(x, y);
        dir = next_dir;
        if (++iter > max_iter) throw Error("trace_boundary: contour did not close");
    } while (!(x == start_x && y == start_y && dir == 0));

    return Polygon(std::move(corners));
}

}  // namespace textsnake
