#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "textsnake/pipeline.hpp"
#include "textsnake/postproc.hpp"
#include "textsnake/synth.hpp"

using namespace textsnake;

namespace {

// Horizontal TCL band: pixel rows [8, 11] over columns [0, 100), r = 10,
// theta = 0, as both maps and mask.
struct BandFixture {
    GeometryMaps maps{32, 128};
    PixelMask mask{32, 128};
    BandFixture() {
        for (int row = 8; row <= 11; ++row)
            for (int col = 0; col < 100; ++col) {
                mask.set(row, col);
                const std::size_t i = maps.index(row, col);
                maps.tr[i] = 1.0f;
                maps.tcl[i] = 1.0f;
                maps.r[i] = 10.0f;
                maps.cos_t[i] = 1.0f;
                maps.sin_t[i] = 0.0f;
            }
    }
};

GeometryMaps rect_gt_maps() {
    AnnotationRecord rec;
    rec.image_id = "rect";
    rec.height = 40;
    rec.width = 120;
    AnnotatedInstance inst;
    inst.polygon = Polygon({{0, 0}, {100, 0}, {100, 20}, {0, 20}});
    rec.instances.push_back(inst);
    return generate_labels(rec).maps;
}

}  // namespace

TEST_CASE("segment_instances: bands, diagonals and ordering") {
    PixelMask mask(16, 16);
    for (int col = 2; col < 10; ++col) {
        mask.set(2, col);
        mask.set(6, col);  // 3 empty rows between the bands
    }
    auto comps = segment_instances(mask);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].pixels.front().first == 2);  // ordered by min row
    CHECK(comps[1].pixels.front().first == 6);
    CHECK(comps[0].id == 0);
    CHECK(comps[1].id == 1);

    PixelMask diag(8, 8);
    diag.set(1, 1);
    diag.set(2, 2);
    CHECK(segment_instances(diag).size() == 1);  // 8-connectivity

    CHECK(segment_instances(PixelMask(8, 8)).empty());
}

TEST_CASE("segment_instances: partition matches BFS flood fill on random masks") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double density = 0.1 + 0.8 * (trial % 10) / 9.0;
        PixelMask mask(64, 64);
        std::size_t set_count = 0;
        for (int row = 0; row < 64; ++row)
            for (int col = 0; col < 64; ++col)
                if (unit(rng) < density) {
                    mask.set(row, col);
                    ++set_count;
                }

        const auto comps = segment_instances(mask);
        const auto ref = oracles::flood_fill_ref(mask);
        REQUIRE(comps.size() == ref.size());

        std::set<std::set<std::pair<int, int>>> got, want;
        std::size_t total = 0;
        for (const TclComponent& c : comps) {
            got.insert(std::set<std::pair<int, int>>(c.pixels.begin(), c.pixels.end()));
            total += c.pixels.size();
        }
        for (const auto& c : ref) want.insert(c);
        CHECK(got == want);
        CHECK(total == set_count);  // exact partition
    }
}

TEST_CASE("centralize: midpoint of the vertical run") {
    const BandFixture fix;
    const Point2 out = centralize({50, 9}, fix.maps, fix.mask);
    CHECK(out.x == doctest::Approx(50.0).epsilon(1e-6));
    CHECK(out.y == doctest::Approx(10.0).epsilon(1e-3));

    // Already at the band mid-line: a fixed point within half a pixel.
    const Point2 fixed_pt = centralize({50, 10}, fix.maps, fix.mask);
    CHECK(distance(fixed_pt, {50, 10}) <= 0.5);

    CHECK_THROWS_AS(centralize({50, 20}, fix.maps, fix.mask), OffComponent);
}

TEST_CASE("stride_step: exact displacement and end behaviour") {
    const BandFixture fix;
    const auto next = stride_step({50, 10}, fix.maps, fix.mask, +1);
    REQUIRE(next.has_value());
    CHECK(next->x == doctest::Approx(55.0).epsilon(1e-12));
    CHECK(next->y == doctest::Approx(10.0).epsilon(1e-12));

    // 0.8 px of band left: even the floored 1 px stride overshoots.
    CHECK_FALSE(stride_step({99.2, 10}, fix.maps, fix.mask, +1).has_value());

    // 2 px of band left: the decremented strides still advance.
    const auto near_end = stride_step({98.0, 10}, fix.maps, fix.mask, +1);
    REQUIRE(near_end.has_value());
    CHECK(near_end->x < 100.0);

    CHECK_THROWS_AS(stride_step({50, 20}, fix.maps, fix.mask, +1), OffComponent);
}

TEST_CASE("stride_step: displacement magnitude is r/2 when no decrement occurs") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> radius(2.0, 12.0);

    GeometryMaps maps(64, 64);
    PixelMask mask(64, 64);
    for (int row = 0; row < 64; ++row)
        for (int col = 0; col < 64; ++col) mask.set(row, col);

    for (int trial = 0; trial < 50; ++trial) {
        const double theta = angle(rng);
        const double r = radius(rng);
        const std::size_t i = maps.index(32, 32);
        maps.r[i] = static_cast<float>(r);
        maps.cos_t[i] = static_cast<float>(std::cos(theta)) * 0.7f;  // unnormalized on purpose
        maps.sin_t[i] = static_cast<float>(std::sin(theta)) * 0.7f;
        const auto next = stride_step({32.5, 32.5}, maps, mask, trial % 2 == 0 ? 1 : -1);
        REQUIRE(next.has_value());
        const float rf = maps.r[i];
        CHECK(std::abs(distance(*next, {32.5, 32.5}) - rf / 2.0) <= 1e-9);
    }
}

TEST_CASE("trace_axis: rectangle ground truth spans the trimmed axis") {
    const GeometryMaps maps = rect_gt_maps();
    const BinarizedMaps bin = binarize(maps, 0.4, 0.6);
    const auto comps = segment_instances(bin.tcl_mask);
    REQUIRE(comps.size() == 1);

    const auto axis = trace_axis(comps[0], maps, bin.tcl_mask);
    REQUIRE(axis.size() >= 3);
    double min_x = 1e18, max_x = -1e18;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        CHECK(std::abs(axis[i].pt.y - 10.0) <= 2.5);
        CHECK(axis[i].r == doctest::Approx(10.0));
        min_x = std::min(min_x, axis[i].pt.x);
        max_x = std::max(max_x, axis[i].pt.x);
    }
    // Monotone in x.
    const bool increasing = axis.back().pt.x > axis.front().pt.x;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (increasing)
            CHECK(axis[i].pt.x >= axis[i - 1].pt.x - 1e-9);
        else
            CHECK(axis[i].pt.x <= axis[i - 1].pt.x + 1e-9);
    }
    // One stride (r/2 = 5) of slack at either end.
    CHECK(std::abs(min_x - 5.0) <= 5.0);
    CHECK(std::abs(max_x - 95.0) <= 5.0);
}

TEST_CASE("trace_axis: single-pixel component yields its own sample") {
    GeometryMaps maps(8, 8);
    PixelMask mask(8, 8);
    mask.set(3, 4);
    maps.r[maps.index(3, 4)] = 7.0f;
    maps.cos_t[maps.index(3, 4)] = 1.0f;

    TclComponent comp;
    comp.pixels = {{3, 4}};
    const auto axis = trace_axis(comp, maps, mask);
    REQUIRE(axis.size() == 1);
    CHECK(axis[0].r == doctest::Approx(7.0));
    CHECK(distance(axis[0].pt, {4.5, 3.5}) <= 0.71);
}

TEST_CASE("trace_axis: curved generator snakes trace within 10% of the axis length") {
    SynthParams params;
    params.seed = 606;
    params.count_min = params.count_max = 1;
    params.radius_min = 6.0;
    params.radius_max = 12.0;
    params.length_min = 250.0;
    params.length_max = 350.0;
    const SynthResult synth = synth_snakes(params, 4);

    for (std::size_t img = 0; img < synth.records.size(); ++img) {
        const LabelBundle bundle = generate_labels(synth.records[img]);
        const BinarizedMaps bin = binarize(bundle.maps, 0.4, 0.6);
        const auto comps = segment_instances(bin.tcl_mask);
        REQUIRE(comps.size() == 1);
        const auto axis = trace_axis(comps[0], bundle.maps, bin.tcl_mask);
        REQUIRE(axis.size() >= 2);

        double traced_len = 0.0;
        for (std::size_t i = 1; i < axis.size(); ++i)
            traced_len += distance(axis[i - 1].pt, axis[i].pt);

        const auto& oracle_axis = synth.oracles[img][0].axis;
        double gen_len = 0.0;
        for (std::size_t i = 1; i < oracle_axis.size(); ++i)
            gen_len += distance(oracle_axis[i - 1], oracle_axis[i]);

        CHECK(std::abs(traced_len - gen_len) / gen_len <= 0.10);
        // Every accepted point lies on the TCL mask.
        for (const AxisPoint& ap : axis) CHECK(bin.tcl_mask.contains_point(ap.pt.x, ap.pt.y));
    }
}

TEST_CASE("reconstruct: disks, exact single-disk mask, empty-radius axis") {
    std::vector<AxisPoint> axis = {{{10, 10}, 5.0, 0.0}};
    const auto [snake, mask] = reconstruct(axis, 32, 32);
    CHECK(snake.disks.size() == 1);
    CHECK(mask == disks_union_mask({Disk({10, 10}, 5.0, 0.0)}, 32, 32));

    std::vector<AxisPoint> flat = {{{10, 10}, 0.0, 0.0}, {{14, 10}, 0.0, 0.0}};
    const auto [snake2, mask2] = reconstruct(flat, 32, 32);
    CHECK(mask2.count() == 0);

    CHECK_THROWS_AS(reconstruct({}, 32, 32), EmptyAxis);
}

TEST_CASE("reconstruct: rectangle round trip reaches 0.9 IoU") {
    const GeometryMaps maps = rect_gt_maps();
    const auto dets = detect(maps);
    REQUIRE(dets.size() == 1);
    PixelMask tr(40, 120);
    for (int row = 0; row < 40; ++row)
        for (int col = 0; col < 120; ++col)
            if (maps.tr[maps.index(row, col)] >= 0.5f) tr.set(row, col);
    CHECK(mask_iou(dets[0].region, tr) >= 0.90);
}

TEST_CASE("filter_candidates: the three heuristics") {
    GeometryMaps maps(32, 32);
    PostprocParams params;

    auto make_component = [&](int row, int col, int count, float r) {
        TclComponent comp;
        for (int k = 0; k < count; ++k) {
            comp.pixels.emplace_back(row, col + k);
            maps.r[maps.index(row, col + k)] = r;
        }
        return comp;
    };
    auto make_detection = [&](double cx, double cy, double r, double tr_fraction) {
        Detection det;
        det.snake.disks.emplace_back(Point2{cx, cy}, r, 0.0);
        det.region = disks_union_mask(det.snake.disks, 32, 32);
        det.boundary = trace_boundary(det.region);
        std::size_t set_left = static_cast<std::size_t>(
            std::lround(tr_fraction * static_cast<double>(det.region.count())));
        for (int row = 0; row < 32 && set_left > 0; ++row)
            for (int col = 0; col < 32 && set_left > 0; ++col)
                if (det.region.get(row, col)) {
                    maps.tr[maps.index(row, col)] = 1.0f;
                    --set_left;
                }
        return det;
    };

    // 3 TCL px with mean r = 20: 3 < 0.2 * 20 = 4, pruned.
    auto comp_small = make_component(2, 2, 3, 20.0f);
    auto det_small = make_detection(8, 8, 4.0, 1.0);
    CHECK(filter_candidates({det_small}, {comp_small}, maps, params).empty());

    // 5 TCL px, mean r = 20, strong TR overlap: kept.
    GeometryMaps maps2(32, 32);
    std::swap(maps, maps2);
    auto comp_ok = make_component(10, 2, 5, 20.0f);
    auto det_ok = make_detection(16, 16, 5.0, 0.9);
    CHECK(filter_candidates({det_ok}, {comp_ok}, maps, params).size() == 1);

    // TR overlap 0.4 < 0.5: pruned.
    GeometryMaps maps3(32, 32);
    std::swap(maps, maps3);
    auto comp_overlap = make_component(20, 2, 8, 3.0f);
    auto det_overlap = make_detection(16, 16, 5.0, 0.4);
    CHECK(filter_candidates({det_overlap}, {comp_overlap}, maps, params).empty());
}

TEST_CASE("filter_candidates: ICDAR preset size filters") {
    GeometryMaps maps(64, 64);
    for (std::size_t i = 0; i < maps.pixel_count(); ++i) maps.tr[i] = 1.0f;

    TclComponent comp;
    for (int col = 10; col < 40; ++col) {
        comp.pixels.emplace_back(32, col);
        maps.r[maps.index(32, col)] = 3.0f;
    }
    Detection det;
    for (int col = 10; col < 40; ++col) det.snake.disks.emplace_back(Point2{col + 0.5, 32.5}, 3.0, 0.0);
    det.region = disks_union_mask(det.snake.disks, 64, 64);
    det.boundary = trace_boundary(det.region);

    CHECK(filter_candidates({det}, {comp}, maps, PostprocParams{}).size() == 1);
    // Short side ~6 px < 10 px: pruned under the preset.
    CHECK(filter_candidates({det}, {comp}, maps, PostprocParams::icdar()).empty());
}

TEST_CASE("detect: empty maps and full synthetic round trip") {
    CHECK(detect(GeometryMaps(64, 64)).empty());

    SynthParams params;
    params.seed = 99;
    params.count_min = params.count_max = 3;
    const SynthResult synth = synth_snakes(params, 2);
    for (const AnnotationRecord& rec : synth.records) {
        const LabelBundle bundle = generate_labels(rec);
        const auto dets = detect(bundle.maps);
        REQUIRE(dets.size() == 3);

        // Greedy best-IoU per instance.
        for (const AnnotatedInstance& inst : rec.instances) {
            const PixelMask gt = rasterize_polygon(inst.polygon, rec.height, rec.width);
            double best = 0.0;
            for (const Detection& det : dets) best = std::max(best, mask_iou(gt, det.region));
            CHECK(best >= 0.8);
        }
    }
}

TEST_CASE("detect: rectangle bounding rectangle and lateral fit") {
    const GeometryMaps maps = rect_gt_maps();
    const auto dets = detect(maps);
    REQUIRE(dets.size() == 1);
    const RotatedRect rect = min_area_rect(dets[0].boundary.vertices());
    // Lateral extent matches within 2 px; the longitudinal ends overshoot by
    // up to half an end radius per side, inherent to disk reconstruction
    // from an axis trimmed by r/2.
    CHECK(std::abs(rect.height - 20.0) <= 2.0);
    CHECK(rect.width >= 98.0);
    CHECK(rect.width <= 100.0 + 2.0 * (10.0 / 2.0 + 1.0));
    CHECK(std::abs(rect.center.x - 50.0) <= 2.0);
    CHECK(std::abs(rect.center.y - 10.0) <= 2.0);
}

TEST_CASE("detect: deterministic and bounded by the dilated TR mask") {
    SynthParams params;
    params.seed = 1234;
    const SynthResult synth = synth_snakes(params, 2);
    for (const AnnotationRecord& rec : synth.records) {
        const LabelBundle bundle = generate_labels(rec);
        const auto a = detect(bundle.maps);
        const auto b = detect(bundle.maps);
        REQUIRE(a.size() == b.size());
        double max_r = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].region == b[i].region);
            CHECK(a[i].score == b[i].score);
            for (const Disk& d : a[i].snake.disks) max_r = std::max(max_r, d.radius);
        }

        // Region pixels stay within max radius of some TR pixel.
        const BinarizedMaps bin = binarize(bundle.maps, 0.4, 0.6);
        for (const Detection& det : a)
            for (int row = 0; row < det.region.height(); ++row)
                for (int col = 0; col < det.region.width(); ++col) {
                    if (!det.region.get(row, col)) continue;
                    bool near = bin.tr_mask.get(row, col);
                    const int rad = static_cast<int>(std::ceil(max_r)) + 1;
                    for (int dr = -rad; dr <= rad && !near; ++dr)
                        for (int dc = -rad; dc <= rad && !near; ++dc)
                            if (bin.tr_mask.get(row + dr, col + dc) &&
                                dr * dr + dc * dc <= rad * rad)
                                near = true;
                    CHECK(near);
                }
    }
}

TEST_CASE("trace_axis: robust to the choice of seed pixel") {
    const GeometryMaps maps = rect_gt_maps();
    const BinarizedMaps bin = binarize(maps, 0.4, 0.6);
    const auto comps = segment_instances(bin.tcl_mask);
    REQUIRE(comps.size() == 1);

    const auto canonical = trace_axis(comps[0], maps, bin.tcl_mask);
    const auto [snake_c, region_c] = reconstruct(canonical, maps.height(), maps.width());

    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> pick(0, comps[0].pixels.size() - 1);
    for (int trial = 0; trial < 8; ++trial) {
        const auto seed_px = comps[0].pixels[pick(rng)];
        const auto axis = trace_axis(comps[0], maps, bin.tcl_mask, seed_px);
        const auto [snake, region] = reconstruct(axis, maps.height(), maps.width());
        CHECK(mask_iou(region, region_c) >= 0.85);
    }
}
