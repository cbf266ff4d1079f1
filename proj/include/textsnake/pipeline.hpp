#pragma once

#include <string>
#include <vector>

#include "textsnake/annotations.hpp"
#include "textsnake/maps.hpp"
#include "textsnake/postproc.hpp"
#include "textsnake/synth.hpp"

namespace textsnake {

/// Ground-truth products for one annotated image.
struct LabelBundle {
    GeometryMaps maps;
    PixelMask ignore;
    std::vector<SnakeDescriptor> snakes;          // one per usable non-ignored instance
    std::vector<std::size_t> snake_instance;      // instance index per snake
    std::vector<std::string> skipped;             // instances no snake could be built for
};

/// Builds maps, don't-care mask and snakes from one record. Instances whose
/// snake extraction fails still contribute their polygon to TR; the failure
/// is recorded in `skipped`. Records without a size use the polygon extent.
LabelBundle generate_labels(const AnnotationRecord& record, const SnakeParams& sp = {});

/// Round-trip outcome for one image.
struct RoundtripImage {
    std::string image_id;
    std::size_t gt_instances = 0;
    std::size_t detections = 0;
    bool count_match = false;
    std::vector<double> ious;  // best one-to-one IoU per non-ignored instance
};

/// labels -> detect -> per-instance IoU against the source polygons.
/// When `scratch_dir` is nonempty the maps make a TSM1 round trip through
/// `<scratch_dir>/<image>.tsm` between the two stages.
RoundtripImage roundtrip_image(const AnnotationRecord& record, const SnakeParams& sp,
                               const PostprocParams& pp, const std::string& scratch_dir = "");

struct RoundtripSummary {
    std::size_t images = 0;
    std::size_t instances = 0;
    std::size_t count_matches = 0;
    std::size_t iou_at_085 = 0;
    double mean_iou = 0.0;
    std::vector<RoundtripImage> per_image;
};

RoundtripSummary summarize_roundtrip(std::vector<RoundtripImage> per_image);
std::string roundtrip_report_json(const RoundtripSummary& summary);

}  // namespace textsnake
