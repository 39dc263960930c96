#pragma once

#include "dilation/correspond.hpp"

#include <array>
#include <cstdint>

namespace dilation {

/// Rational viewport and pixel geometry for rasters. The colormap is a fixed
/// signed diverging ramp anchored at zero, so negative pseudo-probability
/// regions stay visually distinct from positive ones.
struct RasterSpec {
    unsigned width = 512;
    unsigned height = 512;
    double x_min = -1.0, x_max = 1.5;
    double y_min = -1.5, y_max = 1.0;
    unsigned sampling_depth = 18;  // addresses are extended to this depth
    std::size_t sample_cap = 1u << 22;
};

struct Image {
    unsigned width = 0;
    unsigned height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    friend bool operator==(const Image&, const Image&) = default;
};

/// Zero-anchored diverging color: negative values ramp to amber, positive to
/// deep blue, zero is the neutral near-white.
std::array<std::uint8_t, 3> signed_colormap(double value, double max_abs);

/// Paint plane address-indexed cell values: each address contributes the
/// points of all its extensions to the sampling depth. Deterministic bytes
/// for fixed inputs; throws on empty data or when the sample budget is hit.
Image raster_tile_values(const LiftedFunction& data, const RasterSpec& spec);

/// Binary image bytes (P6 color, P5 grayscale).
std::string encode_ppm(const Image& image);
std::string encode_pgm(const Image& image);  // luma of rgb

void write_file(const std::string& path, const std::string& bytes);

}  // namespace dilation
