#pragma once

#include <vector>

#include "textsnake/labelgen.hpp"
#include "textsnake/postproc.hpp"
#include "textsnake/rectify.hpp"

namespace textsnake {

/// Strokes detection boundaries in yellow, ground-truth polygons in green
/// and detection axes in red onto a copy of `img`. The output is always RGB
/// with the input dimensions; gray input is replicated across channels.
RasterImage render_overlay(const RasterImage& img, const std::vector<Detection>& dets,
                           const std::vector<AnnotatedInstance>& gts);

/// Strokes a polyline with the given RGB color (sub-pixel stepped, 1 px pen).
void draw_polyline(RasterImage& img, const std::vector<Point2>& pts, bool closed,
                   std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace textsnake
