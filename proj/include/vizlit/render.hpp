#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vizlit/chart_types.hpp"

namespace vizlit::render {

struct Color {
    std::uint8_t r = 0, g = 0, b = 0;
    std::string hex() const;
    bool operator==(const Color&) const = default;
};

Color from_hex(std::string_view hex);

struct Rect {
    double x = 0, y = 0, w = 0, h = 0;
    Color fill;
    bool stroked = false;
    Color stroke;
    double stroke_width = 1.0;
    std::string cls;
};

struct LineSeg {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    Color color;
    double width = 1.0;
    std::string cls;
};

struct Polyline {
    std::vector<std::pair<double, double>> points;
    Color color;
    double width = 2.0;
    std::string cls;
};

struct Polygon {
    std::vector<std::pair<double, double>> points;
    Color fill;
    bool stroked = false;
    Color stroke;
    double stroke_width = 1.0;
    std::string cls;
};

struct Circle {
    double cx = 0, cy = 0, r = 1.0;
    Color fill;
    bool stroked = false;
    Color stroke;
    double stroke_width = 1.0;
    std::string cls;
};

enum class Anchor { Start, Middle, End };

struct Text {
    double x = 0, y = 0;  // y is the text baseline
    std::string text;
    double size = 12.0;
    Color fill;
    Anchor anchor = Anchor::Start;
    bool bold = false;
    std::string cls;
};

using Primitive = std::variant<Rect, LineSeg, Polyline, Polygon, Circle, Text>;

// Resolution-independent display list. The SVG writer serializes it; the
// rasterizer draws the same primitives, so both artifacts show identical
// geometry.
struct Scene {
    int width = 1000;
    int height = 700;
    Color background{255, 255, 255};
    std::vector<Primitive> prims;
};

struct ImageArtifact {
    std::string svg;
    std::string png;  // binary
};

Scene build_scene(const ChartSpec& spec);        // throws RenderUnsupported
std::string to_svg(const Scene& scene);
std::string rasterize_png(const Scene& scene);
ImageArtifact render(const ChartSpec& spec);

// 12 categorical series colors, pairwise CIE76 distance >= 25.
const std::vector<Color>& categorical_palette();
// 4-step sequential scale for choropleth bins, same floor.
const std::vector<Color>& sequential_palette();

// Uncompressed RGBA -> PNG bytes (stored-deflate zlib stream); byte
// deterministic for a given pixel buffer.
std::string encode_png(int width, int height, const std::vector<std::uint8_t>& rgba);

}  // namespace vizlit::render
