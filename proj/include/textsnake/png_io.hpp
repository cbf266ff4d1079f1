#pragma once

#include <string>

#include "textsnake/rectify.hpp"

namespace textsnake {

/// Reads a PNG into an 8-bit gray or RGB image (palette expanded, alpha
/// stripped, 16-bit narrowed).
RasterImage read_png(const std::string& path);

void write_png(const RasterImage& img, const std::string& path);

}  // namespace textsnake
