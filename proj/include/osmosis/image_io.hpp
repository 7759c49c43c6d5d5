#pragma once

#include <string>

#include "osmosis/field.hpp"

namespace osmosis {

/// Reads 8/16-bit grayscale or RGB rasters. Formats by content/extension:
/// PNG, binary PGM (P5), binary PPM (P6). Sample values map to reals as-is,
/// no gamma handling.
MultiChannelImage read_image(const std::string& path);

/// Writes PNG/PGM/PPM at the requested bit depth (8 or 16), picking the
/// format from the extension. Values are clamped to the depth's range and
/// rounded; 16-bit PGM round-trips integer data bit-exactly.
void write_image(const MultiChannelImage& image, const std::string& path, int bit_depth = 16);

/// Single-channel raster as a binary mask: nonzero -> 1.
LabelMap read_mask(const std::string& path);

/// Single-channel raster as raw integer labels (tile map).
LabelMap read_label_map(const std::string& path);

/// Portable float map ('Pf'), little-endian, for drift-field dumps. Plain
/// width/height/values so face-centered arrays of any shape can be dumped.
struct PfmImage {
    int width = 0;
    int height = 0;
    std::vector<double> values; // row-major, top row first
};
void write_pfm(const PfmImage& image, const std::string& path);
PfmImage read_pfm(const std::string& path);

} // namespace osmosis
