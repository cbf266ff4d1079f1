#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "textsnake/geometry.hpp"
#include "textsnake/labelgen.hpp"
#include "textsnake/maps.hpp"

namespace textsnake {

/// One 8-connected group of TCL pixels, as (row, col) pairs in scan order.
struct TclComponent {
    std::vector<std::pair<int, int>> pixels;
    int id = 0;
};

/// A reconstructed text instance.
struct Detection {
    SnakeDescriptor snake;
    PixelMask region;
    Polygon boundary;
    double score = 0.0;  // mean TR score over the region
};

struct PostprocParams {
    double t_tr = 0.4;
    double t_tcl = 0.6;
    double tcl_count_factor = 0.2;
    double tr_overlap_min = 0.5;
    bool icdar_filters = false;
    double min_side_px = 10.0;
    double min_area_px = 300.0;

    static PostprocParams icdar() {
        PostprocParams p;
        p.icdar_filters = true;
        return p;
    }
};

/// One traced axis sample.
struct AxisPoint {
    Point2 pt;
    double r = 0.0;
    double theta = 0.0;
};

/// Partitions the set pixels of `tcl_mask` into maximal 8-connected
/// components (union-find with path compression and union by rank).
/// Components are ordered by (min row, min col) of their pixels.
std::vector<TclComponent> segment_instances(const PixelMask& tcl_mask);

/// Relocates `pt` to the midpoint of the TCL band along the local normal.
/// Walks both ways in 0.5 px steps (at most 2*r+2 px each way), then refines
/// each exit to the band boundary.
Point2 centralize(const Point2& pt, const GeometryMaps& maps, const PixelMask& tcl_mask);

/// One stride of +-(r/2)*(cos, sin) from `pt`. When the candidate leaves the
/// mask the stride is halved (at most 6 times, never below 1 px); returns
/// the first in-mask candidate or nullopt when the end is reached. `ref_dir`,
/// when given, flips the tangent so consecutive strides keep moving the same
/// way along the axis.
std::optional<Point2> stride_step(const Point2& pt, const GeometryMaps& maps,
                                  const PixelMask& tcl_mask, int sign,
                                  const std::optional<Point2>& ref_dir = std::nullopt);

/// Traces the central axis of one component: centralizes a deterministic
/// seed (the pixel nearest the component centroid), strides outward in both
/// directions centralizing after every step, and returns the combined list
/// with r/theta sampled at each point. `seed_override` substitutes the seed
/// pixel (used to probe seed robustness).
std::vector<AxisPoint> trace_axis(const TclComponent& comp, const GeometryMaps& maps,
                                  const PixelMask& tcl_mask,
                                  const std::optional<std::pair<int, int>>& seed_override = std::nullopt);

/// Sweeps disks along a traced axis: the snake plus its union mask.
std::pair<SnakeDescriptor, PixelMask> reconstruct(const std::vector<AxisPoint>& axis, int h, int w);

/// Applies the false-positive heuristics: minimum TCL pixel count relative
/// to mean radius, minimum TR overlap of the reconstructed area, and the
/// optional ICDAR size filters.
std::vector<Detection> filter_candidates(std::vector<Detection> cands,
                                         const std::vector<TclComponent>& comps,
                                         const GeometryMaps& maps, const PostprocParams& params);

/// Full post-processing: binarize, segment, trace, reconstruct, filter.
/// Deterministic for fixed inputs.
std::vector<Detection> detect(const GeometryMaps& maps, const PostprocParams& params = {});

/// Outer boundary of the set region as a polygon on the pixel-corner
/// lattice; rasterizing it reproduces the region for hole-free masks.
/// Returns an empty polygon for an empty mask.
Polygon trace_boundary(const PixelMask& mask);

}  // namespace textsnake
