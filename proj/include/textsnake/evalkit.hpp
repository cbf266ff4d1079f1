#pragma once

#include <vector>

#include "textsnake/geometry.hpp"
#include "textsnake/labelgen.hpp"
#include "textsnake/postproc.hpp"

namespace textsnake {

struct ImageScore {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0;
};

struct ScoreReport : ImageScore {
    std::vector<ImageScore> per_image;
};

/// Scores one image: detection and ground-truth masks are rasterized at
/// (h, w), detections are matched one-to-one to non-ignored ground truth
/// greedily by descending IoU (ties to lower GT index then lower detection
/// index), accepting pairs with IoU >= iou_thr. Unmatched detections whose
/// IoU against an ignore region reaches 0.5 are neutral. With no detections
/// and nonempty ground truth, precision is 0; with neither, all ratios are 1.
ImageScore match_and_score(const std::vector<Detection>& dets,
                           const std::vector<AnnotatedInstance>& gts, int h, int w,
                           double iou_thr);

/// Micro-averaged aggregate over per-image scores.
ScoreReport aggregate_scores(std::vector<ImageScore> per_image);

}  // namespace textsnake
