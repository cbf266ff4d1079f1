#include "textsnake/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <json.hpp>

#include "textsnake/evalkit.hpp"

namespace textsnake {

namespace {

std::pair<int, int> effective_size(const AnnotationRecord& record) {
    if (record.height > 0 && record.width > 0) return {record.height, record.width};
    double max_x = 1.0, max_y = 1.0;
    for (const AnnotatedInstance& inst : record.instances)
        for (const Point2& p : inst.polygon.vertices()) {
            max_x = std::max(max_x, p.x);
            max_y = std::max(max_y, p.y);
        }
    return {static_cast<int>(std::ceil(max_y)) + 2, static_cast<int>(std::ceil(max_x)) + 2};
}

}  // namespace

LabelBundle generate_labels(const AnnotationRecord& record, const SnakeParams& sp) {
    const auto [h, w] = effective_size(record);

    std::vector<Polygon> tr_polys, ignore_polys;
    LabelBundle bundle;
    for (std::size_t i = 0; i < record.instances.size(); ++i) {
        const AnnotatedInstance& inst = record.instances[i];
        if (inst.ignore) {
            ignore_polys.push_back(inst.polygon);
            continue;
        }
        tr_polys.push_back(inst.polygon);
        try {
            bundle.snakes.push_back(extract_snake(inst, sp));
            bundle.snake_instance.push_back(i);
        } catch (const Error& e) {
            bundle.skipped.push_back("instance " + std::to_string(i) + ": " + e.what());
        }
    }

    bundle.maps = render_label_maps(bundle.snakes, tr_polys, h, w);
    bundle.ignore = render_ignore_mask(ignore_polys, h, w);
    return bundle;
}

RoundtripImage roundtrip_image(const AnnotationRecord& record, const SnakeParams& sp,
                               const PostprocParams& pp, const std::string& scratch_dir) {
    LabelBundle bundle = generate_labels(record, sp);

    GeometryMaps maps = std::move(bundle.maps);
    if (!scratch_dir.empty()) {
        const std::string path = scratch_dir + "/" + record.image_id + ".tsm";
        save_maps(maps, path);
        maps = load_maps(path);
    }

    const std::vector<Detection> dets = detect(maps, pp);

    RoundtripImage out;
    out.image_id = record.image_id;
    out.detections = dets.size();

    std::vector<PixelMask> gt_masks;
    for (const AnnotatedInstance& inst : record.instances) {
        if (inst.ignore) continue;
        gt_masks.push_back(rasterize_polygon(inst.polygon, maps.height(), maps.width()));
    }
    out.gt_instances = gt_masks.size();
    out.count_match = out.gt_instances == out.detections;

    // Greedy one-to-one assignment by descending IoU.
    struct Pair {
        double iou;
        std::size_t gt, det;
    };
    std::vector<Pair> pairs;
    for (std::size_t g = 0; g < gt_masks.size(); ++g)
        for (std::size_t d = 0; d < dets.size(); ++d)
            pairs.push_back({mask_iou(gt_masks[g], dets[d].region), g, d});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::make_tuple(-a.iou, a.gt, a.det) < std::make_tuple(-b.iou, b.gt, b.det);
    });
    out.ious.assign(gt_masks.size(), 0.0);
    std::vector<bool> gt_used(gt_masks.size(), false), det_used(dets.size(), false);
    for (const Pair& p : pairs) {
        if (gt_used[p.gt] || det_used[p.det]) continue;
        gt_used[p.gt] = true;
        det_used[p.det] = true;
        out.ious[p.gt] = p.iou;
    }
    return out;
}

RoundtripSummary summarize_roundtrip(std::vector<RoundtripImage> per_image) {
    RoundtripSummary s;
    s.images = per_image.size();
    double iou_sum = 0.0;
    for (const RoundtripImage& img : per_image) {
        s.instances += img.gt_instances;
        if (img.count_match) ++s.count_matches;
        for (double iou : img.ious) {
            iou_sum += iou;
            if (iou >= 0.85) ++s.iou_at_085;
        }
    }
    s.mean_iou = s.instances > 0 ? iou_sum / static_cast<double>(s.instances) : 0.0;
    s.per_image = std::move(per_image);
    return s;
}

std::string roundtrip_report_json(const RoundtripSummary& s) {
    using nlohmann::json;
    json report;
    report["images"] = s.images;
    report["instances"] = s.instances;
    report["count_match_rate"] =
        s.images > 0 ? static_cast<double>(s.count_matches) / s.images : 0.0;
    report["iou_ge_085_rate"] =
        s.instances > 0 ? static_cast<double>(s.iou_at_085) / s.instances : 0.0;
    report["mean_iou"] = s.mean_iou;
    json per_image = json::array();
    for (const RoundtripImage& img : s.per_image) {
        json j;
        j["image"] = img.image_id;
        j["gt_instances"] = img.gt_instances;
        j["detections"] = img.detections;
        j["count_match"] = img.count_match;
        j["ious"] = img.ious;
        per_image.push_back(std::move(j));
    }
    report["per_image"] = std::move(per_image);
    return report.dump(2) + "\n";
}

}  // namespace textsnake
