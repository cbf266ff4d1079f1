#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "textsnake/geometry.hpp"
#include "textsnake/maps.hpp"

namespace textsnake {

/// Ordered disk chain describing one text instance: its axis, width profile
/// and course.
struct SnakeDescriptor {
    std::vector<Disk> disks;
    std::optional<Polygon> source_polygon;

    /// Total arc length of the center polyline.
    double axis_length() const;
};

/// One annotated instance; `ignore` marks don't-care regions that are kept
/// out of the TR channel and neutral in loss and scoring.
struct AnnotatedInstance {
    Polygon polygon;
    bool ignore = false;
};

/// Finds the head and tail edges of a snake-shaped polygon: the two
/// non-adjacent edges whose measurement M(e) = cos<next edge, previous edge>
/// is closest to -1. Ties within 1e-6 of the best pair sum are broken by
/// the smallest total edge length, then by lowest index pair.
std::pair<std::size_t, std::size_t> edge_head_tail(const Polygon& poly);

struct SnakeParams {
    int n_samples = 32;
    /// When set, the sample count is 1 per 2 px of mean sideline length,
    /// clamped to [8, 128].
    bool adaptive_samples = false;
};

/// Builds a snake from a polygon annotation: splits the boundary at the
/// head/tail edges into two sidelines, samples arc-length-uniform anchor
/// pairs, takes midpoints as disk centers and half anchor distances as
/// radii, fits theta over the 5 nearest axis disks, and trims both ends by
/// half the end radius of arc length.
SnakeDescriptor extract_snake(const AnnotatedInstance& instance, const SnakeParams& params = {});

/// Rasterizes ground-truth geometry maps. TR is the union of the rasterized
/// polygons. TCL is the union, over snakes, of the axis swept by disks of
/// radius r/5, intersected with TR; each TCL pixel takes r/cos/sin from the
/// nearest axis disk. Geometry channels are zero outside TCL.
GeometryMaps render_label_maps(const std::vector<SnakeDescriptor>& snakes,
                               const std::vector<Polygon>& masks, int h, int w);

/// Union mask of don't-care polygons (skips degenerate ones).
PixelMask render_ignore_mask(const std::vector<Polygon>& ignore_polys, int h, int w);

/// Midpoints of the head and tail edges: the untrimmed axis endpoints.
std::pair<Point2, Point2> axis_endpoints(const Polygon& poly);

}  // namespace textsnake
