#pragma once

#include <cstdint>
#include <vector>

#include "textsnake/geometry.hpp"
#include "textsnake/labelgen.hpp"

namespace textsnake {

/// 8-bit raster image, row-major, 1 (gray) or 3 (RGB) channels.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> samples;

    RasterImage() = default;
    RasterImage(int w, int h, int c)
        : width(w), height(h), channels(c),
          samples(static_cast<std::size_t>(w) * h * c, 0) {}

    std::uint8_t& at(int row, int col, int ch) {
        return samples[(static_cast<std::size_t>(row) * width + col) * channels + ch];
    }
    std::uint8_t at(int row, int col, int ch) const {
        return samples[(static_cast<std::size_t>(row) * width + col) * channels + ch];
    }
};

/// Unwarps a curved instance into a horizontal strip. Output height is
/// 2 * median(radius) rounded (min 2 px); output width is the rounded axis
/// arc length. Each consecutive disk pair maps its source quad onto the
/// corresponding vertical strip by bilinear interpolation; sampling outside
/// the image clamps to the border.
RasterImage rectify_instance(const RasterImage& img, const SnakeDescriptor& snake);

}  // namespace textsnake
