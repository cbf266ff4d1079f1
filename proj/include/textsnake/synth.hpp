#pragma once

#include <cstdint>
#include <vector>

#include "textsnake/annotations.hpp"

namespace textsnake {

/// Parameters of the synthetic snake generator. All sampling is driven by a
/// seeded mt19937_64 with in-house uniform helpers, so output is
/// byte-identical for a fixed seed on any platform.
struct SynthParams {
    std::uint64_t seed = 0;
    int count_min = 1;  // instances per image, sampled uniformly
    int count_max = 4;
    int image_size = 512;
    double radius_min = 6.0;
    double radius_max = 24.0;
    double curvature_max = 0.018;  // rad per px of axis
    double length_min = 160.0;
    double length_max = 360.0;
    double min_separation = 8.0;  // >= 4 px between instances
};

/// Generator ground truth for one instance: the dense axis polyline and the
/// radius at every axis point.
struct SynthOracleInstance {
    std::vector<Point2> axis;
    std::vector<double> radii;
};

struct SynthResult {
    std::vector<AnnotationRecord> records;
    std::vector<std::vector<SynthOracleInstance>> oracles;  // parallel to records
};

/// Generates `n_images` images of smooth random snakes: bounded-curvature
/// axes with smooth radius profiles, polygonized by offsetting +-r along the
/// normals. All polygons are simple, pairwise separated by at least
/// `min_separation`, and fully inside the image. Throws GenerationFailure
/// after 1000 consecutive rejected placements.
SynthResult synth_snakes(const SynthParams& params, int n_images = 1);

std::string write_oracle(const SynthResult& result);

}  // namespace textsnake
