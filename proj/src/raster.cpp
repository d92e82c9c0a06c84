// SPDX-License-Identifier: Apache-2.0
#include "raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include <zlib.h>

namespace geoforge {

namespace {

struct Color {
    std::uint8_t r = 0, g = 0, b = 0;
    bool none = false;
};

Color parse_color(const std::string& s) {
    Color c;
    if (s == "none" || s.empty()) {
        c.none = true;
        return c;
    }
    if (s.size() != 7 || s[0] != '#')
        throw SvgParseError("unsupported color: " + s);
    auto hex = [&s](int i) {
        return static_cast<std::uint8_t>(std::stoi(s.substr(i, 2), nullptr, 16));
    };
    c.r = hex(1);
    c.g = hex(3);
    c.b = hex(5);
    return c;
}

using AttrMap = std::map<std::string, std::string>;

// Scans key="value" pairs inside one element tag.
AttrMap parse_attrs(const std::string& tag) {
    AttrMap attrs;
    size_t pos = 0;
    while (true) {
        size_t eq = tag.find("=\"", pos);
        if (eq == std::string::npos) break;
        size_t key_start = tag.find_last_of(" \t\n", eq);
        std::string key = tag.substr(key_start + 1, eq - key_start - 1);
        size_t val_end = tag.find('"', eq + 2);
        if (val_end == std::string::npos) throw SvgParseError("unterminated attribute");
        attrs[key] = tag.substr(eq + 2, val_end - eq - 2);
        pos = val_end + 1;
    }
    return attrs;
}

double attr_num(const AttrMap& a, const std::string& key, double fallback = 0.0) {
    auto it = a.find(key);
    if (it == a.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw SvgParseError("bad numeric attribute " + key + "=\"" + it->second +
                            "\"");
    }
}

void fill_rect(Image& img, double x, double y, double w, double h, Color c) {
    if (c.none) return;
    int x0 = std::max(0, static_cast<int>(std::floor(x)));
    int y0 = std::max(0, static_cast<int>(std::floor(y)));
    int x1 = std::min(img.width, static_cast<int>(std::ceil(x + w)));
    int y1 = std::min(img.height, static_cast<int>(std::ceil(y + h)));
    for (int yy = y0; yy < y1; ++yy)
        for (int xx = x0; xx < x1; ++xx) {
            std::uint8_t* p = img.pixel(xx, yy);
            p[0] = c.r;
            p[1] = c.g;
            p[2] = c.b;
        }
}

void stamp_disc(Image& img, double cx, double cy, double radius, Color c) {
    if (c.none) return;
    int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + radius)));
    int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + radius)));
    double r2 = radius * radius;
    for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) {
            double dx = xx + 0.5 - cx, dy = yy + 0.5 - cy;
            if (dx * dx + dy * dy > r2) continue;
            std::uint8_t* p = img.pixel(xx, yy);
            p[0] = c.r;
            p[1] = c.g;
            p[2] = c.b;
        }
}

void stroke_segment(Image& img, double x1, double y1, double x2, double y2,
                    double width, Color c) {
    double len = std::hypot(x2 - x1, y2 - y1);
    int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        stamp_disc(img, x1 + t * (x2 - x1), y1 + t * (y2 - y1),
                   std::max(width * 0.5, 0.5), c);
    }
}

void stroke_circle(Image& img, double cx, double cy, double r, double width,
                   Color c) {
    if (r <= 0) return;
    int steps = std::max(16, static_cast<int>(std::ceil(2.0 * M_PI * r * 2.0)));
    for (int i = 0; i < steps; ++i) {
        double t = 2.0 * M_PI * i / steps;
        stamp_disc(img, cx + r * std::cos(t), cy + r * std::sin(t),
                   std::max(width * 0.5, 0.5), c);
    }
}

}  // namespace

Image rasterize_svg(const std::string& svg, int width, int height) {
    Image img;
    img.width = width;
    img.height = height;
    img.rgb.assign(static_cast<size_t>(width) * height * 3, 255);

    size_t pos = 0;
    while (true) {
        size_t open = svg.find('<', pos);
        if (open == std::string::npos) break;
        size_t close = svg.find('>', open);
        if (close == std::string::npos) throw SvgParseError("unterminated tag");
        std::string tag = svg.substr(open, close - open + 1);
        pos = close + 1;

        if (tag.rfind("<rect", 0) == 0) {
            AttrMap a = parse_attrs(tag);
            fill_rect(img, attr_num(a, "x"), attr_num(a, "y"),
                      attr_num(a, "width"), attr_num(a, "height"),
                      parse_color(a.count("fill") ? a.at("fill") : "none"));
        } else if (tag.rfind("<line", 0) == 0) {
            AttrMap a = parse_attrs(tag);
            stroke_segment(img, attr_num(a, "x1"), attr_num(a, "y1"),
                           attr_num(a, "x2"), attr_num(a, "y2"),
                           attr_num(a, "stroke-width", 1.0),
                           parse_color(a.count("stroke") ? a.at("stroke") : "none"));
        } else if (tag.rfind("<circle", 0) == 0) {
            AttrMap a = parse_attrs(tag);
            double cx = attr_num(a, "cx"), cy = attr_num(a, "cy");
            double r = attr_num(a, "r");
            Color fill = parse_color(a.count("fill") ? a.at("fill") : "none");
            if (!fill.none) stamp_disc(img, cx, cy, r, fill);
            if (a.count("stroke"))
                stroke_circle(img, cx, cy, r, attr_num(a, "stroke-width", 1.0),
                              parse_color(a.at("stroke")));
        }
        // <text> and structural tags are ignored
    }
    return img;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
    // filter byte 0 in front of every scanline
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<size_t>(img.height) * (1 + 3 * img.width));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = img.pixel(0, y);
        raw.insert(raw.end(), row, row + 3 * img.width);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(),
                  static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw RasterBackendUnavailable("zlib compression failed");
    compressed.resize(bound);

    std::vector<std::uint8_t> out;
    auto be32 = [&out](std::uint32_t v) {
        out.push_back(static_cast<std::uint8_t>(v >> 24));
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    };
    auto chunk = [&](const char type[4], const std::vector<std::uint8_t>& data) {
        be32(static_cast<std::uint32_t>(data.size()));
        size_t start = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), data.begin(), data.end());
        uLong crc = crc32(0L, Z_NULL, 0);
        crc = crc32(crc, out.data() + start, static_cast<uInt>(out.size() - start));
        be32(static_cast<std::uint32_t>(crc));
    };

    static const std::uint8_t signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n',
                                              0x1a, '\n'};
    out.insert(out.end(), signature, signature + 8);
    std::vector<std::uint8_t> ihdr;
    auto push32 = [&ihdr](std::uint32_t v) {
        ihdr.push_back(static_cast<std::uint8_t>(v >> 24));
        ihdr.push_back(static_cast<std::uint8_t>(v >> 16));
        ihdr.push_back(static_cast<std::uint8_t>(v >> 8));
        ihdr.push_back(static_cast<std::uint8_t>(v));
    };
    push32(static_cast<std::uint32_t>(img.width));
    push32(static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    chunk("IHDR", ihdr);
    chunk("IDAT", compressed);
    chunk("IEND", {});
    return out;
}

}  // namespace geoforge
