// SPDX-License-Identifier: Apache-2.0
//
// Rasterization of the renderer's SVG subset (rect / line / circle) into an
// RGB buffer, plus a PNG encoder. Text elements are not rasterized.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoforge {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // height x width x 3, row-major

    std::uint8_t* pixel(int x, int y) {
        return rgb.data() + 3 * (static_cast<size_t>(y) * width + x);
    }
    const std::uint8_t* pixel(int x, int y) const {
        return rgb.data() + 3 * (static_cast<size_t>(y) * width + x);
    }
};

class RasterBackendUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SvgParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Draws the SVG subset at the given output size.
Image rasterize_svg(const std::string& svg, int width, int height);

// 8-bit RGB PNG via zlib.
std::vector<std::uint8_t> encode_png(const Image& img);

}  // namespace geoforge
