#include "textsnake/evalkit.hpp"

#include <algorithm>
#include <tuple>

namespace textsnake {

namespace {

void fill_ratios(ImageScore& s, std::size_t total_dets, std::size_t total_gt) {
    if (total_dets == 0 && total_gt == 0) {
        s.precision = s.recall = s.f_measure = 1.0;
        return;
    }
    s.precision = (s.tp + s.fp) > 0 ? static_cast<double>(s.tp) / (s.tp + s.fp) : 0.0;
    s.recall = (s.tp + s.fn) > 0 ? static_cast<double>(s.tp) / (s.tp + s.fn) : 0.0;
    const double pr = s.precision + s.recall;
    s.f_measure = pr > 0.0 ? 2.0 * s.precision * s.recall / pr : 0.0;
}

PixelMask rasterize_or_empty(const Polygon& poly, int h, int w) {
    try {
        return rasterize_polygon(poly, h, w);
    } catch (const DegeneratePolygon&) {
        return PixelMask(h, w);
    }
}

}  // namespace

ImageScore match_and_score(const std::vector<Detection>& dets,
                           const std::vector<AnnotatedInstance>& gts, int h, int w,
                           double iou_thr) {
    if (!(iou_thr > 0.0 && iou_thr <= 1.0))
        throw ThresholdOutOfRange("iou threshold must lie in (0, 1]");

    std::vector<PixelMask> det_masks;
    det_masks.reserve(dets.size());
    for (const Detection& d : dets) {
        if (d.region.height() == h && d.region.width() == w)
            det_masks.push_back(d.region);
        else
            det_masks.push_back(rasterize_or_empty(d.boundary, h, w));
    }

    std::vector<PixelMask> gt_masks;
    std::vector<std::size_t> scored_gt;  // indices of non-ignored GT
    gt_masks.reserve(gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) {
        gt_masks.push_back(rasterize_or_empty(gts[g].polygon, h, w));
        if (!gts[g].ignore) scored_gt.push_back(g);
    }

    // Candidate pairs sorted by (IoU desc, gt index asc, det index asc).
    struct Pair {
        double iou;
        std::size_t gt, det;
    };
    std::vector<Pair> pairs;
    for (std::size_t g : scored_gt)
        for (std::size_t d = 0; d < dets.size(); ++d) {
            const double iou = mask_iou(gt_masks[g], det_masks[d]);
            if (iou >= iou_thr) pairs.push_back({iou, g, d});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::make_tuple(-a.iou, a.gt, a.det) < std::make_tuple(-b.iou, b.gt, b.det);
    });

    std::vector<bool> gt_used(gts.size(), false);
    std::vector<bool> det_used(dets.size(), false);
    ImageScore score;
    for (const Pair& p : pairs) {
        if (gt_used[p.gt] || det_used[p.det]) continue;
        gt_used[p.gt] = true;
        det_used[p.det] = true;
        ++score.tp;
    }

    for (std::size_t d = 0; d < dets.size(); ++d) {
        if (det_used[d]) continue;
        bool neutral = false;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!gts[g].ignore) continue;
            if (mask_iou(gt_masks[g], det_masks[d]) >= 0.5) {
                neutral = true;
                break;
            }
        }
        if (!neutral) ++score.fp;
    }
    score.fn = scored_gt.size() - score.tp;

    fill_ratios(score, dets.size(), scored_gt.size());
    return score;
}

ScoreReport aggregate_scores(std::vector<ImageScore> per_image) {
    ScoreReport report;
    for (const ImageScore& s : per_image) {
        report.tp += s.tp;
        report.fp += s.fp;
        report.fn += s.fn;
    }
    const std::size_t dets = report.tp + report.fp;
    const std::size_t gt = report.tp + report.fn;
    fill_ratios(report, dets, gt);
    report.per_image = std::move(per_image);
    return report;
}

}  // namespace textsnake
