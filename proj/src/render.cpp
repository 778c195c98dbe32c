#include "vizlit/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "vizlit/chartgen.hpp"
#include "vizlit/errors.hpp"
#include "vizlit/font5x7.hpp"
#include "vizlit/util.hpp"

namespace vizlit::render {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const Color kBlack{20, 20, 20};
const Color kGrid{221, 221, 221};
const Color kAxis{80, 80, 80};
const Color kWhite{255, 255, 255};

struct Frame {
    double x0, y0, w, h;  // plot rectangle, y0 = top
    double bottom() const { return y0 + h; }
};

struct AxisScale {
    double lo = 0.0, hi = 1.0, step = 0.2;
    double to_px(double v, const Frame& f) const {
        return f.y0 + f.h - (v - lo) / (hi - lo) * f.h;
    }
    double to_px_x(double v, const Frame& f) const {
        return f.x0 + (v - lo) / (hi - lo) * f.w;
    }
};

double nice_step(double range, int target_ticks) {
    if (range <= 0) return 1.0;
    const double raw = range / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step;
    if (norm <= 1.0)
        step = 1.0;
    else if (norm <= 2.0)
        step = 2.0;
    else if (norm <= 2.5)
        step = 2.5;
    else if (norm <= 5.0)
        step = 5.0;
    else
        step = 10.0;
    return step * mag;
}

AxisScale make_scale(double mn, double mx, bool include_zero) {
    if (include_zero) mn = std::min(mn, 0.0);
    if (mx <= mn) mx = mn + 1.0;
    const double pad = include_zero ? 0.0 : 0.06 * (mx - mn);
    AxisScale s;
    s.step = nice_step(mx - mn + 2 * pad, 5);
    s.lo = std::floor((mn - pad) / s.step) * s.step;
    s.hi = std::ceil((mx + pad) / s.step) * s.step;
    if (include_zero && s.lo > 0.0) s.lo = 0.0;
    if (s.hi <= s.lo) s.hi = s.lo + s.step;
    return s;
}

struct SceneBuilder {
    const ChartSpec& spec;
    Scene scene;
    double W, H;

    explicit SceneBuilder(const ChartSpec& s) : spec(s) {
        scene.width = s.render_params.width;
        scene.height = s.render_params.height;
        W = scene.width;
        H = scene.height;
    }

    double fs(double at700) const { return at700 * H / 700.0; }

    Frame frame(bool with_legend) const {
        const double ml = 0.09 * W;
        const double mr = (with_legend ? 0.24 : 0.05) * W;
        const double mt = 0.11 * H;
        const double mb = 0.13 * H;
        return {ml, mt, W - ml - mr, H - mt - mb};
    }

    void title() {
        scene.prims.push_back(Text{W / 2, 0.055 * H, spec.title, fs(19), kBlack, Anchor::Middle,
                                   true, "title"});
    }

    void axis_captions(const Frame& f) {
        std::string xcap = spec.x_axis.text;
        if (!spec.x_axis.unit.empty()) xcap += " (" + spec.x_axis.unit + ")";
        std::string ycap = spec.y_axis.text;
        if (!spec.y_axis.unit.empty()) ycap += " (" + spec.y_axis.unit + ")";
        scene.prims.push_back(Text{f.x0 + f.w / 2, H - 0.025 * H, xcap, fs(14), kAxis,
                                   Anchor::Middle, false, "axis-x-caption"});
        scene.prims.push_back(
            Text{0.012 * W, f.y0 - 0.018 * H, ycap, fs(14), kAxis, Anchor::Start, false,
                 "axis-y-caption"});
    }

    void y_axis(const Frame& f, const AxisScale& s, const char* suffix = "") {
        for (double v = s.lo; v <= s.hi + 1e-9; v += s.step) {
            const double y = s.to_px(v, f);
            scene.prims.push_back(LineSeg{f.x0, y, f.x0 + f.w, y, kGrid, 1.0, "grid"});
            scene.prims.push_back(Text{f.x0 - 8, y + fs(4), format_double(v) + suffix, fs(12),
                                       kAxis, Anchor::End, false, "tick-y"});
        }
        scene.prims.push_back(LineSeg{f.x0, f.y0, f.x0, f.bottom(), kAxis, 1.5, "axis"});
        scene.prims.push_back(LineSeg{f.x0, f.bottom(), f.x0 + f.w, f.bottom(), kAxis, 1.5, "axis"});
    }

    void x_category_ticks(const Frame& f, const std::vector<std::string>& cats) {
        const double slot = f.w / cats.size();
        for (std::size_t i = 0; i < cats.size(); ++i) {
            const double cx = f.x0 + (i + 0.5) * slot;
            scene.prims.push_back(LineSeg{cx, f.bottom(), cx, f.bottom() + 5, kAxis, 1.0, "tick"});
            scene.prims.push_back(
                Text{cx, f.bottom() + fs(18), cats[i], fs(12), kAxis, Anchor::Middle, false,
                     "tick-x"});
        }
    }

    void numeric_x_axis(const Frame& f, const AxisScale& s) {
        for (double v = s.lo; v <= s.hi + 1e-9; v += s.step) {
            const double x = s.to_px_x(v, f);
            scene.prims.push_back(LineSeg{x, f.y0, x, f.bottom(), kGrid, 1.0, "grid"});
            scene.prims.push_back(Text{x, f.bottom() + fs(18), format_double(v), fs(12), kAxis,
                                       Anchor::Middle, false, "tick-x"});
        }
        scene.prims.push_back(LineSeg{f.x0, f.bottom(), f.x0 + f.w, f.bottom(), kAxis, 1.5, "axis"});
        scene.prims.push_back(LineSeg{f.x0, f.y0, f.x0, f.bottom(), kAxis, 1.5, "axis"});
    }

    void legend(const Frame& f, const std::vector<std::string>& labels,
                const std::vector<Color>& colors) {
        const double lx = f.x0 + f.w + 0.02 * W;
        double ly = f.y0 + 0.01 * H;
        const double sw = fs(14);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            scene.prims.push_back(Rect{lx, ly, sw, sw, colors[i % colors.size()], true, kAxis, 0.5,
                                       "legend-swatch"});
            scene.prims.push_back(Text{lx + sw + 6, ly + sw - fs(3), labels[i], fs(12), kBlack,
                                       Anchor::Start, false, "legend-label"});
            ly += sw + fs(8);
        }
    }

    // --- chart bodies -----------------------------------------------------

    void line_or_area(bool filled) {
        title();
        const Frame f = frame(false);
        const auto& v = spec.series[0].values;
        const auto s = make_scale(*std::min_element(v.begin(), v.end()),
                                  *std::max_element(v.begin(), v.end()), false);
        y_axis(f, s);
        x_category_ticks(f, spec.categories);
        axis_captions(f);
        const double slot = f.w / v.size();
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < v.size(); ++i)
            pts.emplace_back(f.x0 + (i + 0.5) * slot, s.to_px(v[i], f));
        const Color c = categorical_palette()[0];
        if (filled) {
            Polygon poly;
            poly.points = pts;
            poly.points.emplace_back(pts.back().first, f.bottom());
            poly.points.emplace_back(pts.front().first, f.bottom());
            poly.fill = Color{static_cast<std::uint8_t>((c.r + 510) / 3),
                              static_cast<std::uint8_t>((c.g + 510) / 3),
                              static_cast<std::uint8_t>((c.b + 510) / 3)};
            poly.cls = "area";
            scene.prims.push_back(poly);
        }
        scene.prims.push_back(Polyline{pts, c, 2.5, "series-line"});
        for (auto [x, y] : pts)
            scene.prims.push_back(Circle{x, y, fs(3.5), c, false, {}, 1.0, "point"});
    }

    void bar() {
        title();
        const Frame f = frame(false);
        const auto& v = spec.series[0].values;
        const auto s = make_scale(0.0, *std::max_element(v.begin(), v.end()), true);
        y_axis(f, s);
        x_category_ticks(f, spec.categories);
        axis_captions(f);
        const double slot = f.w / v.size();
        const Color c = categorical_palette()[0];
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = f.x0 + (i + 0.2) * slot;
            const double y = s.to_px(v[i], f);
            scene.prims.push_back(Rect{x, y, slot * 0.6, f.bottom() - y, c, false, {}, 1.0, "bar"});
        }
    }

    void stacked_bar(bool normalized) {
        title();
        const Frame f = frame(true);
        const std::size_t n = spec.categories.size();
        std::vector<double> totals(n, 0.0);
        for (const auto& sr : spec.series)
            for (std::size_t i = 0; i < n; ++i) totals[i] += sr.values[i];
        AxisScale s;
        if (normalized) {
            s.lo = 0.0;
            s.hi = 100.0;
            s.step = 20.0;
        } else {
            s = make_scale(0.0, *std::max_element(totals.begin(), totals.end()), true);
        }
        y_axis(f, s, normalized ? "%" : "");
        x_category_ticks(f, spec.categories);
        axis_captions(f);
        const double slot = f.w / n;
        const auto& pal = categorical_palette();
        for (std::size_t i = 0; i < n; ++i) {
            double cum = 0.0;
            const double x = f.x0 + (i + 0.2) * slot;
            for (std::size_t k = 0; k < spec.series.size(); ++k) {
                const double v = spec.series[k].values[i];
                const double y_top = s.to_px(cum + v, f);
                const double y_bot = s.to_px(cum, f);
                scene.prims.push_back(Rect{x, y_top, slot * 0.6, y_bot - y_top, pal[k], true,
                                           kWhite, 0.5, "segment"});
                cum += v;
            }
        }
        std::vector<std::string> names;
        std::vector<Color> colors;
        for (std::size_t k = 0; k < spec.series.size(); ++k) {
            names.push_back(spec.series[k].name);
            colors.push_back(pal[k]);
        }
        legend(f, names, colors);
    }

    void pie() {
        title();
        const Frame f = frame(false);
        const double cx = f.x0 + f.w / 2, cy = f.y0 + f.h / 2;
        const double radius = 0.38 * std::min(f.w, f.h) + 0.08 * std::min(W, H);
        const auto& v = spec.series[0].values;
        const auto& pal = categorical_palette();
        double cum = 0.0;
        constexpr double kTau = 6.283185307179586;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double a0 = -kTau / 4 + kTau * cum / 100.0;
            const double a1 = -kTau / 4 + kTau * (cum + v[i]) / 100.0;
            Polygon slice;
            slice.points.emplace_back(cx, cy);
            const int steps = std::max(2, static_cast<int>((a1 - a0) / (kTau / 96.0)));
            for (int k = 0; k <= steps; ++k) {
                const double a = a0 + (a1 - a0) * k / steps;
                slice.points.emplace_back(cx + radius * std::cos(a), cy + radius * std::sin(a));
            }
            slice.fill = pal[i % pal.size()];
            slice.stroked = true;
            slice.stroke = kWhite;
            slice.stroke_width = 1.5;
            slice.cls = "slice";
            scene.prims.push_back(slice);
            const double mid = 0.5 * (a0 + a1);
            const double lx = cx + (radius + 16) * std::cos(mid);
            const double ly = cy + (radius + 16) * std::sin(mid);
            const Anchor anchor = std::cos(mid) > 0.15   ? Anchor::Start
                                  : std::cos(mid) < -0.15 ? Anchor::End
                                                          : Anchor::Middle;
            scene.prims.push_back(Text{lx, ly + fs(4), spec.categories[i], fs(13), kBlack, anchor,
                                       false, "slice-label"});
            cum += v[i];
        }
    }

    void histogram() {
        title();
        const Frame f = frame(false);
        const auto& v = spec.series[0].values;
        const auto s = make_scale(0.0, *std::max_element(v.begin(), v.end()), true);
        y_axis(f, s);
        x_category_ticks(f, spec.categories);
        axis_captions(f);
        const double slot = f.w / v.size();
        const Color c = categorical_palette()[0];
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = f.x0 + i * slot;
            const double y = s.to_px(v[i], f);
            scene.prims.push_back(Rect{x, y, slot, f.bottom() - y, c, true, kWhite, 1.0, "bin"});
        }
    }

    void scatter_or_bubble(bool bubble) {
        title();
        const Frame f = frame(false);
        const auto& xs = spec.series[0].values;
        const auto& ys = spec.series[1].values;
        const auto sx = make_scale(*std::min_element(xs.begin(), xs.end()),
                                   *std::max_element(xs.begin(), xs.end()), false);
        const auto sy = make_scale(*std::min_element(ys.begin(), ys.end()),
                                   *std::max_element(ys.begin(), ys.end()), false);
        y_axis(f, sy);
        numeric_x_axis(f, sx);
        axis_captions(f);
        const Color c = categorical_palette()[0];
        double max_size = 1.0;
        if (bubble) {
            for (double v : spec.series[2].values) max_size = std::max(max_size, v);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double px = sx.to_px_x(xs[i], f);
            const double py = sy.to_px(ys[i], f);
            double r = fs(4);
            if (bubble) r = fs(7) + fs(22) * std::sqrt(spec.series[2].values[i] / max_size);
            scene.prims.push_back(Circle{px, py, r, c, true, kWhite, 1.0, "point"});
            if (bubble) {
                scene.prims.push_back(Text{px, py - r - fs(4), spec.categories[i], fs(11), kBlack,
                                           Anchor::Middle, false, "point-label"});
            }
        }
    }

    void stacked_area() {
        title();
        const Frame f = frame(true);
        const std::size_t n = spec.categories.size();
        std::vector<double> totals(n, 0.0);
        for (const auto& sr : spec.series)
            for (std::size_t i = 0; i < n; ++i) totals[i] += sr.values[i];
        const auto s = make_scale(0.0, *std::max_element(totals.begin(), totals.end()), true);
        y_axis(f, s);
        x_category_ticks(f, spec.categories);
        axis_captions(f);
        const double slot = f.w / n;
        const auto& pal = categorical_palette();
        std::vector<double> cum(n, 0.0);
        for (std::size_t k = 0; k < spec.series.size(); ++k) {
            Polygon band;
            for (std::size_t i = 0; i < n; ++i)
                band.points.emplace_back(f.x0 + (i + 0.5) * slot,
                                         s.to_px(cum[i] + spec.series[k].values[i], f));
            for (std::size_t i = n; i-- > 0;)
                band.points.emplace_back(f.x0 + (i + 0.5) * slot, s.to_px(cum[i], f));
            band.fill = pal[k];
            band.cls = "band";
            scene.prims.push_back(band);
            for (std::size_t i = 0; i < n; ++i) cum[i] += spec.series[k].values[i];
        }
        std::vector<std::string> names;
        std::vector<Color> colors;
        for (std::size_t k = 0; k < spec.series.size(); ++k) {
            names.push_back(spec.series[k].name);
            colors.push_back(pal[k]);
        }
        legend(f, names, colors);
    }

    // Fixed synthetic 12-region map: a 4x3 quad tiling whose shared vertices
    // carry constant jitter so borders look organic while regions tile
    // exactly.
    void choropleth() {
        title();
        const Frame f = frame(true);
        const auto& v = spec.series[0].values;
        static constexpr double kJx[4][5] = {{0, 0, 0, 0, 0},
                                             {0, 0.14, -0.10, 0.08, 0},
                                             {0, -0.08, 0.12, -0.12, 0},
                                             {0, 0, 0, 0, 0}};
        static constexpr double kJy[4][5] = {{0, 0, 0, 0, 0},
                                             {0.10, -0.06, 0.10, -0.08, 0.06},
                                             {-0.06, 0.10, -0.10, 0.06, -0.08},
                                             {0, 0, 0, 0, 0}};
        const double cw = f.w / 4.0, ch = f.h / 3.0;
        auto vx = [&](int r, int c) { return f.x0 + c * cw + kJx[std::min(r, 3)][c] * cw; };
        auto vy = [&](int r, int c) { return f.y0 + r * ch + kJy[std::min(r, 3)][c] * ch; };
        const auto& seq = sequential_palette();
        const auto& edges = chartgen::choropleth_bin_edges();
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                const int i = r * 4 + c;
                int bin = 3;
                for (std::size_t b = 0; b < edges.size(); ++b) {
                    if (v[i] < edges[b]) {
                        bin = static_cast<int>(b);
                        break;
                    }
                }
                Polygon region;
                region.points = {{vx(r, c), vy(r, c)},
                                 {vx(r, c + 1), vy(r, c + 1)},
                                 {vx(r + 1, c + 1), vy(r + 1, c + 1)},
                                 {vx(r + 1, c), vy(r + 1, c)}};
                region.fill = seq[bin];
                region.stroked = true;
                region.stroke = kAxis;
                region.stroke_width = 1.2;
                region.cls = "region";
                scene.prims.push_back(region);
                const double cx = (vx(r, c) + vx(r, c + 1) + vx(r + 1, c + 1) + vx(r + 1, c)) / 4;
                const double cy = (vy(r, c) + vy(r, c + 1) + vy(r + 1, c + 1) + vy(r + 1, c)) / 4;
                scene.prims.push_back(Text{cx, cy + fs(4), spec.categories[i], fs(12),
                                           bin >= 2 ? kWhite : kBlack, Anchor::Middle, false,
                                           "region-label"});
            }
        }
        std::vector<std::string> bins = {"under 3%", "3% to 6%", "6% to 9%", "9% or more"};
        std::vector<Color> colors(seq.begin(), seq.end());
        legend(f, bins, colors);
        std::string cap = spec.y_axis.text;
        if (!spec.y_axis.unit.empty()) cap += " (" + spec.y_axis.unit + ")";
        scene.prims.push_back(
            Text{f.x0, H - 0.025 * H, cap, fs(14), kAxis, Anchor::Start, false, "axis-y-caption"});
    }

    // slice-and-dice: one column per group, leaves stacked inside
    void treemap() {
        title();
        const Frame f = frame(false);
        std::vector<std::string> group_names;
        for (const auto& g : spec.groups) {
            if (std::find(group_names.begin(), group_names.end(), g) == group_names.end())
                group_names.push_back(g);
        }
        const auto& v = spec.series[0].values;
        const double total = std::accumulate(v.begin(), v.end(), 0.0);
        const auto& pal = categorical_palette();
        double x = f.x0;
        const double header = fs(20);
        for (std::size_t g = 0; g < group_names.size(); ++g) {
            double group_sum = 0.0;
            std::vector<std::size_t> leaves;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (spec.groups[i] == group_names[g]) {
                    group_sum += v[i];
                    leaves.push_back(i);
                }
            }
            const double col_w = f.w * group_sum / total;
            scene.prims.push_back(Rect{x, f.y0, col_w, header, Color{70, 70, 70}, true, kWhite,
                                       1.0, "group-header"});
            scene.prims.push_back(Text{x + col_w / 2, f.y0 + header - fs(5), group_names[g],
                                       fs(12), kWhite, Anchor::Middle, true, "group-label"});
            double y = f.y0 + header;
            const double body_h = f.h - header;
            for (std::size_t li = 0; li < leaves.size(); ++li) {
                const std::size_t i = leaves[li];
                const double leaf_h = body_h * v[i] / group_sum;
                scene.prims.push_back(Rect{x, y, col_w, leaf_h, pal[(g * 3 + li) % pal.size()],
                                           true, kWhite, 1.5, "leaf"});
                if (leaf_h > fs(16) && col_w > fs(40)) {
                    scene.prims.push_back(Text{x + col_w / 2, y + leaf_h / 2 + fs(4),
                                               spec.categories[i], fs(12), kWhite, Anchor::Middle,
                                               false, "leaf-label"});
                }
                y += leaf_h;
            }
            x += col_w;
        }
    }
};

// ---- rasterizer ------------------------------------------------------------

struct Canvas {
    int w, h;
    std::vector<std::uint8_t> px;

    Canvas(int w_, int h_, Color bg) : w(w_), h(h_), px(static_cast<std::size_t>(w_) * h_ * 4) {
        for (int i = 0; i < w * h; ++i) {
            px[i * 4u] = bg.r;
            px[i * 4u + 1] = bg.g;
            px[i * 4u + 2] = bg.b;
            px[i * 4u + 3] = 255;
        }
    }

    void set(int x, int y, Color c) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 4;
        px[o] = c.r;
        px[o + 1] = c.g;
        px[o + 2] = c.b;
        px[o + 3] = 255;
    }
};

void raster_line(Canvas& cv, const LineSeg& l) {
    const double half = std::max(0.5, l.width / 2.0);
    const int x0 = static_cast<int>(std::floor(std::min(l.x1, l.x2) - half - 1));
    const int x1 = static_cast<int>(std::ceil(std::max(l.x1, l.x2) + half + 1));
    const int y0 = static_cast<int>(std::floor(std::min(l.y1, l.y2) - half - 1));
    const int y1 = static_cast<int>(std::ceil(std::max(l.y1, l.y2) + half + 1));
    const double dx = l.x2 - l.x1, dy = l.y2 - l.y1;
    const double len2 = dx * dx + dy * dy;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double cx = x + 0.5, cy = y + 0.5;
            double t = 0.0;
            if (len2 > 0.0) t = std::clamp(((cx - l.x1) * dx + (cy - l.y1) * dy) / len2, 0.0, 1.0);
            const double ex = l.x1 + t * dx - cx, ey = l.y1 + t * dy - cy;
            if (ex * ex + ey * ey <= half * half) cv.set(x, y, l.color);
        }
    }
}

void raster_rect(Canvas& cv, const Rect& r) {
    const int x0 = static_cast<int>(std::floor(r.x));
    const int x1 = static_cast<int>(std::ceil(r.x + r.w));
    const int y0 = static_cast<int>(std::floor(r.y));
    const int y1 = static_cast<int>(std::ceil(r.y + r.h));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double cx = x + 0.5, cy = y + 0.5;
            if (cx >= r.x && cx < r.x + r.w && cy >= r.y && cy < r.y + r.h) cv.set(x, y, r.fill);
        }
    }
    if (r.stroked) {
        const LineSeg sides[4] = {{r.x, r.y, r.x + r.w, r.y, r.stroke, r.stroke_width, ""},
                                  {r.x + r.w, r.y, r.x + r.w, r.y + r.h, r.stroke, r.stroke_width, ""},
                                  {r.x + r.w, r.y + r.h, r.x, r.y + r.h, r.stroke, r.stroke_width, ""},
                                  {r.x, r.y + r.h, r.x, r.y, r.stroke, r.stroke_width, ""}};
        for (const auto& s : sides) raster_line(cv, s);
    }
}

void raster_polygon(Canvas& cv, const Polygon& p) {
    if (p.points.size() < 3) return;
    double miny = p.points[0].second, maxy = miny;
    for (const auto& pt : p.points) {
        miny = std::min(miny, pt.second);
        maxy = std::max(maxy, pt.second);
    }
    const int y0 = static_cast<int>(std::floor(miny));
    const int y1 = static_cast<int>(std::ceil(maxy));
    std::vector<double> xs;
    for (int y = y0; y <= y1; ++y) {
        const double sy = y + 0.5;
        xs.clear();
        const std::size_t n = p.points.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = p.points[i];
            const auto& b = p.points[(i + 1) % n];
            if ((a.second <= sy && b.second > sy) || (b.second <= sy && a.second > sy)) {
                xs.push_back(a.first + (sy - a.second) / (b.second - a.second) * (b.first - a.first));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            const int xa = static_cast<int>(std::floor(xs[i]));
            const int xb = static_cast<int>(std::ceil(xs[i + 1]));
            for (int x = xa; x <= xb; ++x) {
                const double cx = x + 0.5;
                if (cx >= xs[i] && cx < xs[i + 1]) cv.set(x, y, p.fill);
            }
        }
    }
    if (p.stroked) {
        const std::size_t n = p.points.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = p.points[i];
            const auto& b = p.points[(i + 1) % n];
            raster_line(cv, {a.first, a.second, b.first, b.second, p.stroke, p.stroke_width, ""});
        }
    }
}

void raster_circle(Canvas& cv, const Circle& c) {
    const int x0 = static_cast<int>(std::floor(c.cx - c.r - 1));
    const int x1 = static_cast<int>(std::ceil(c.cx + c.r + 1));
    const int y0 = static_cast<int>(std::floor(c.cy - c.r - 1));
    const int y1 = static_cast<int>(std::ceil(c.cy + c.r + 1));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x + 0.5 - c.cx, dy = y + 0.5 - c.cy;
            if (dx * dx + dy * dy <= c.r * c.r) cv.set(x, y, c.fill);
        }
    }
}

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    for (std::size_t i = 0; i < s.size();) {
        const auto b = static_cast<unsigned char>(s[i]);
        char32_t cp = '?';
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b >> 5) == 0x6 && i + 1 < s.size()) {
            cp = ((b & 0x1f) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3f);
            len = 2;
        } else if ((b >> 4) == 0xe && i + 2 < s.size()) {
            cp = ((b & 0x0f) << 12) | ((static_cast<unsigned char>(s[i + 1]) & 0x3f) << 6) |
                 (static_cast<unsigned char>(s[i + 2]) & 0x3f);
            len = 3;
        } else if ((b >> 3) == 0x1e && i + 3 < s.size()) {
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void raster_text(Canvas& cv, const Text& t) {
    const auto cps = decode_utf8(t.text);
    const int scale = std::max(1, static_cast<int>(std::lround(t.size / 8.0)));
    const int advance = 6 * scale;
    const int total_w = static_cast<int>(cps.size()) * advance - scale;
    int x = static_cast<int>(std::lround(t.x));
    if (t.anchor == Anchor::Middle) x -= total_w / 2;
    if (t.anchor == Anchor::End) x -= total_w;
    const int top = static_cast<int>(std::lround(t.y)) - 7 * scale;
    const int passes = t.bold ? 2 : 1;
    for (char32_t cp : cps) {
        const std::uint8_t* glyph = glyph5x7(cp);
        for (int col = 0; col < 5; ++col) {
            for (int row = 0; row < 7; ++row) {
                if (glyph[col] & (1 << row)) {
                    for (int sy = 0; sy < scale; ++sy) {
                        for (int sx = 0; sx < scale; ++sx) {
                            for (int p = 0; p < passes; ++p) {
                                cv.set(x + col * scale + sx + p, top + row * scale + sy, t.fill);
                            }
                        }
                    }
                }
            }
        }
        x += advance;
    }
}

}  // namespace

std::string Color::hex() const {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

Color from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return 0;
    };
    if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
    Color c;
    if (hex.size() >= 6) {
        c.r = static_cast<std::uint8_t>(nibble(hex[0]) * 16 + nibble(hex[1]));
        c.g = static_cast<std::uint8_t>(nibble(hex[2]) * 16 + nibble(hex[3]));
        c.b = static_cast<std::uint8_t>(nibble(hex[4]) * 16 + nibble(hex[5]));
    }
    return c;
}

const std::vector<Color>& categorical_palette() {
    static const std::vector<Color> pal = {
        from_hex("1f77b4"), from_hex("ff7f0e"), from_hex("2ca02c"), from_hex("d62728"),
        from_hex("9467bd"), from_hex("8c564b"), from_hex("e377c2"), from_hex("7f7f7f"),
        from_hex("bcbd22"), from_hex("17becf"), from_hex("393b79"), from_hex("f4a6c0")};
    return pal;
}

const std::vector<Color>& sequential_palette() {
    static const std::vector<Color> pal = {from_hex("eff7ff"), from_hex("8fc1e3"),
                                           from_hex("2b7bba"), from_hex("083a7a")};
    return pal;
}

std::string to_svg(const Scene& scene) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << scene.width << "\" height=\""
        << scene.height << "\" viewBox=\"0 0 " << scene.width << " " << scene.height << "\">\n";
    out << "<rect width=\"" << scene.width << "\" height=\"" << scene.height << "\" fill=\""
        << scene.background.hex() << "\"/>\n";
    auto cls_attr = [](const std::string& cls) {
        return cls.empty() ? std::string() : " class=\"" + cls + "\"";
    };
    for (const auto& prim : scene.prims) {
        if (const auto* r = std::get_if<Rect>(&prim)) {
            out << "<rect" << cls_attr(r->cls) << " x=\"" << fmt2(r->x) << "\" y=\"" << fmt2(r->y)
                << "\" width=\"" << fmt2(r->w) << "\" height=\"" << fmt2(r->h) << "\" fill=\""
                << r->fill.hex() << "\"";
            if (r->stroked)
                out << " stroke=\"" << r->stroke.hex() << "\" stroke-width=\""
                    << fmt2(r->stroke_width) << "\"";
            out << "/>\n";
        } else if (const auto* l = std::get_if<LineSeg>(&prim)) {
            out << "<line" << cls_attr(l->cls) << " x1=\"" << fmt2(l->x1) << "\" y1=\""
                << fmt2(l->y1) << "\" x2=\"" << fmt2(l->x2) << "\" y2=\"" << fmt2(l->y2)
                << "\" stroke=\"" << l->color.hex() << "\" stroke-width=\"" << fmt2(l->width)
                << "\"/>\n";
        } else if (const auto* pl = std::get_if<Polyline>(&prim)) {
            out << "<polyline" << cls_attr(pl->cls) << " points=\"";
            for (std::size_t i = 0; i < pl->points.size(); ++i) {
                if (i) out << " ";
                out << fmt2(pl->points[i].first) << "," << fmt2(pl->points[i].second);
            }
            out << "\" fill=\"none\" stroke=\"" << pl->color.hex() << "\" stroke-width=\""
                << fmt2(pl->width) << "\"/>\n";
        } else if (const auto* pg = std::get_if<Polygon>(&prim)) {
            out << "<polygon" << cls_attr(pg->cls) << " points=\"";
            for (std::size_t i = 0; i < pg->points.size(); ++i) {
                if (i) out << " ";
                out << fmt2(pg->points[i].first) << "," << fmt2(pg->points[i].second);
            }
            out << "\" fill=\"" << pg->fill.hex() << "\"";
            if (pg->stroked)
                out << " stroke=\"" << pg->stroke.hex() << "\" stroke-width=\""
                    << fmt2(pg->stroke_width) << "\"";
            out << "/>\n";
        } else if (const auto* c = std::get_if<Circle>(&prim)) {
            out << "<circle" << cls_attr(c->cls) << " cx=\"" << fmt2(c->cx) << "\" cy=\""
                << fmt2(c->cy) << "\" r=\"" << fmt2(c->r) << "\" fill=\"" << c->fill.hex() << "\"";
            if (c->stroked)
                out << " stroke=\"" << c->stroke.hex() << "\" stroke-width=\""
                    << fmt2(c->stroke_width) << "\"";
            out << "/>\n";
        } else if (const auto* t = std::get_if<Text>(&prim)) {
            out << "<text" << cls_attr(t->cls) << " x=\"" << fmt2(t->x) << "\" y=\"" << fmt2(t->y)
                << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"" << fmt2(t->size)
                << "\" fill=\"" << t->fill.hex() << "\"";
            if (t->anchor == Anchor::Middle) out << " text-anchor=\"middle\"";
            if (t->anchor == Anchor::End) out << " text-anchor=\"end\"";
            if (t->bold) out << " font-weight=\"bold\"";
            out << ">" << xml_escape(t->text) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string rasterize_png(const Scene& scene) {
    Canvas cv(scene.width, scene.height, scene.background);
    for (const auto& prim : scene.prims) {
        if (const auto* r = std::get_if<Rect>(&prim))
            raster_rect(cv, *r);
        else if (const auto* l = std::get_if<LineSeg>(&prim))
            raster_line(cv, *l);
        else if (const auto* pl = std::get_if<Polyline>(&prim)) {
            for (std::size_t i = 0; i + 1 < pl->points.size(); ++i) {
                raster_line(cv, {pl->points[i].first, pl->points[i].second,
                                 pl->points[i + 1].first, pl->points[i + 1].second, pl->color,
                                 pl->width, ""});
            }
        } else if (const auto* pg = std::get_if<Polygon>(&prim))
            raster_polygon(cv, *pg);
        else if (const auto* c = std::get_if<Circle>(&prim))
            raster_circle(cv, *c);
        else if (const auto* t = std::get_if<Text>(&prim))
            raster_text(cv, *t);
    }
    return encode_png(scene.width, scene.height, cv.px);
}

Scene build_scene(const ChartSpec& spec) {
    spec.validate();
    SceneBuilder b(spec);
    switch (spec.chart_type) {
        case ChartType::Line: b.line_or_area(false); break;
        case ChartType::Area: b.line_or_area(true); break;
        case ChartType::Bar: b.bar(); break;
        case ChartType::StackedBar: b.stacked_bar(false); break;
        case ChartType::StackedBar100: b.stacked_bar(true); break;
        case ChartType::Pie: b.pie(); break;
        case ChartType::Histogram: b.histogram(); break;
        case ChartType::Scatter: b.scatter_or_bubble(false); break;
        case ChartType::Bubble: b.scatter_or_bubble(true); break;
        case ChartType::StackedArea: b.stacked_area(); break;
        case ChartType::Choropleth: b.choropleth(); break;
        case ChartType::Treemap: b.treemap(); break;
        default:
            throw RenderUnsupported("chart type not implemented: " +
                                    std::string(to_string(spec.chart_type)));
    }
    return b.scene;
}

ImageArtifact render(const ChartSpec& spec) {
    const Scene scene = build_scene(spec);
    ImageArtifact art;
    art.svg = to_svg(scene);
    art.png = rasterize_png(scene);
    return art;
}

}  // namespace vizlit::render
