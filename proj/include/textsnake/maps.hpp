#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "textsnake/geometry.hpp"

namespace textsnake {

/// Per-pixel channel stack over an h x w grid: TR score, TCL score, radius,
/// cos(theta) and sin(theta). Scores are post-activation probabilities in
/// [0, 1]; geometry channels are zero outside the TCL band in ground truth.
class GeometryMaps {
public:
    GeometryMaps() = default;
    GeometryMaps(int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    std::vector<float> tr, tcl, r, cos_t, sin_t;

    /// Channel values at the pixel containing a continuous point, clamped
    /// to the grid.
    float r_at(double x, double y) const { return r[clamped_index(x, y)]; }
    float tr_at(double x, double y) const { return tr[clamped_index(x, y)]; }
    /// Unit-normalized (cos, sin) at the pixel containing (x, y); falls back
    /// to theta = 0 when the stored vector is near zero.
    void direction_at(double x, double y, double& cos_out, double& sin_out) const;

private:
    std::size_t clamped_index(double x, double y) const;

    int height_ = 0;
    int width_ = 0;
};

/// Thresholded score maps; tcl_mask is already intersected with tr_mask.
struct BinarizedMaps {
    PixelMask tr_mask;
    PixelMask tcl_mask;
};

/// Applies thresholds to the TR and TCL score channels. The TCL mask is
/// masked by the TR mask.
BinarizedMaps binarize(const GeometryMaps& maps, double t_tr, double t_tcl);

/// TSM1 container: magic "TSMAPS01", u32le height/width/channel-count (5),
/// then the five planes (tr, tcl, r, cos, sin) as row-major binary32 le.
void save_maps(const GeometryMaps& maps, const std::string& path);
GeometryMaps load_maps(const std::string& path);

void save_maps(const GeometryMaps& maps, std::ostream& out);
GeometryMaps load_maps(std::istream& in);

}  // namespace textsnake
