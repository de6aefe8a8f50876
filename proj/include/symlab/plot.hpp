#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "symlab/analysis.hpp"
#include "symlab/image.hpp"
#include "symlab/planner.hpp"

// Minimal raster plotting: metric curves, eigenvalue bars, latent
// projections and viewing-sphere pose charts, all emitted as PPM images.

namespace symlab {
namespace plot {

struct Rgb {
    float r = 0.0f, g = 0.0f, b = 0.0f;
};

inline constexpr Rgb kWhite{1.0f, 1.0f, 1.0f};
inline constexpr Rgb kBlack{0.05f, 0.05f, 0.05f};
inline constexpr Rgb kGrid{0.85f, 0.85f, 0.85f};
inline constexpr Rgb kBlue{0.12f, 0.35f, 0.80f};
inline constexpr Rgb kRed{0.85f, 0.15f, 0.12f};
inline constexpr Rgb kGreen{0.10f, 0.60f, 0.25f};

inline void fill(Image& img, const Rgb& c) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            img.at(y, x, 0) = c.r;
            img.at(y, x, 1) = c.g;
            img.at(y, x, 2) = c.b;
        }
}

inline void put(Image& img, int x, int y, const Rgb& c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    img.at(y, x, 0) = c.r;
    img.at(y, x, 1) = c.g;
    img.at(y, x, 2) = c.b;
}

inline void draw_line(Image& img, double x0, double y0, double x1, double y1, const Rgb& c) {
    const double dx = x1 - x0, dy = y1 - y0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::fabs(dx),
                                                                      std::fabs(dy)))));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        put(img, static_cast<int>(std::lround(x0 + t * dx)),
            static_cast<int>(std::lround(y0 + t * dy)), c);
    }
}

inline void draw_disc(Image& img, double cx, double cy, double radius, const Rgb& c) {
    const int lo_y = static_cast<int>(std::floor(cy - radius));
    const int hi_y = static_cast<int>(std::ceil(cy + radius));
    const int lo_x = static_cast<int>(std::floor(cx - radius));
    const int hi_x = static_cast<int>(std::ceil(cx + radius));
    for (int y = lo_y; y <= hi_y; ++y)
        for (int x = lo_x; x <= hi_x; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) put(img, x, y, c);
}

inline void draw_ring(Image& img, double cx, double cy, double radius, const Rgb& c) {
    const int steps = std::max(32, static_cast<int>(radius * 8));
    for (int i = 0; i < steps; ++i) {
        const double a = kTwoPi * i / steps;
        put(img, static_cast<int>(std::lround(cx + radius * std::cos(a))),
            static_cast<int>(std::lround(cy + radius * std::sin(a))), c);
    }
}

// 5x7 glyphs for axis labels; each row is a 5-bit mask, MSB left.
inline const uint8_t* glyph5x7(char ch) {
    static const uint8_t digits[10][7] = {
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
        {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
        {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
        {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
        {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
        {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
        {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
    };
    static const uint8_t dot[7] = {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C};
    static const uint8_t minus[7] = {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00};
    static const uint8_t plus[7] = {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00};
    static const uint8_t e[7] = {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E};
    static const uint8_t blank[7] = {0, 0, 0, 0, 0, 0, 0};
    if (ch >= '0' && ch <= '9') return digits[ch - '0'];
    switch (ch) {
        case '.': return dot;
        case '-': return minus;
        case '+': return plus;
        case 'e': return e;
        default: return blank;
    }
}

inline void draw_text(Image& img, int x, int y, const std::string& s, const Rgb& c) {
    for (size_t k = 0; k < s.size(); ++k) {
        const uint8_t* g = glyph5x7(s[k]);
        for (int row = 0; row < 7; ++row)
            for (int col = 0; col < 5; ++col)
                if (g[row] & (1 << (4 - col)))
                    put(img, x + static_cast<int>(k) * 6 + col, y + row, c);
    }
}

inline std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Plot frame mapping data coordinates to pixels, with optional log-10 x.
struct Frame {
    int width = 640, height = 480;
    int margin_left = 56, margin_right = 16, margin_top = 16, margin_bottom = 40;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool log_x = false;

    double tx(double x) const {
        const double v = log_x ? std::log10(x) : x;
        const double lo = log_x ? std::log10(x_min) : x_min;
        const double hi = log_x ? std::log10(x_max) : x_max;
        const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return margin_left + t * (width - margin_left - margin_right);
    }
    double ty(double y) const {
        const double t = y_max > y_min ? (y - y_min) / (y_max - y_min) : 0.5;
        return height - margin_bottom - t * (height - margin_top - margin_bottom);
    }
};

inline Frame frame_for(const std::vector<double>& xs, const std::vector<double>& ys,
                       bool log_x) {
    if (xs.empty() || xs.size() != ys.size()) throw Error("plot: empty or mismatched series");
    Frame f;
    f.log_x = log_x;
    f.x_min = *std::min_element(xs.begin(), xs.end());
    f.x_max = *std::max_element(xs.begin(), xs.end());
    f.y_min = *std::min_element(ys.begin(), ys.end());
    f.y_max = *std::max_element(ys.begin(), ys.end());
    if (log_x && f.x_min <= 0.0) throw Error("plot: log axis requires positive x values");
    if (f.x_min == f.x_max) {
        f.x_min = log_x ? f.x_min / 2.0 : f.x_min - 1.0;
        f.x_max = log_x ? f.x_max * 2.0 : f.x_max + 1.0;
    }
    if (f.y_min == f.y_max) {
        f.y_min -= 1.0;
        f.y_max += 1.0;
    } else {
        const double pad = 0.05 * (f.y_max - f.y_min);
        f.y_min -= pad;
        f.y_max += pad;
    }
    return f;
}

inline void draw_axes(Image& img, const Frame& f, const std::vector<double>& x_ticks,
                      int y_ticks) {
    const double x0 = f.margin_left, x1 = f.width - f.margin_right;
    const double y0 = f.height - f.margin_bottom, y1 = f.margin_top;
    for (const double x : x_ticks) {
        const double px = f.tx(x);
        draw_line(img, px, y0, px, y1, kGrid);
        draw_text(img, static_cast<int>(px) - 12, static_cast<int>(y0) + 6, format_tick(x),
                  kBlack);
    }
    for (int i = 0; i <= y_ticks; ++i) {
        const double y = f.y_min + (f.y_max - f.y_min) * i / y_ticks;
        const double py = f.ty(y);
        draw_line(img, x0, py, x1, py, kGrid);
        draw_text(img, 4, static_cast<int>(py) - 3, format_tick(y), kBlack);
    }
    draw_line(img, x0, y0, x1, y0, kBlack);
    draw_line(img, x0, y0, x0, y1, kBlack);
}

// Metric-vs-beta curve on a log-10 beta axis; failed rows (NaN) are skipped.
inline Image plot_metric_vs_beta(const std::vector<double>& betas,
                                 const std::vector<double>& values,
                                 const Rgb& color = kBlue) {
    if (betas.size() != values.size()) throw Error("plot: betas/values size mismatch");
    std::vector<double> xs, ys;
    for (size_t i = 0; i < betas.size(); ++i)
        if (std::isfinite(values[i])) {
            xs.push_back(betas[i]);
            ys.push_back(values[i]);
        }
    if (xs.empty()) throw Error("plot: no finite values to plot");
    const Frame f = frame_for(xs, ys, true);
    Image img(f.width, f.height);
    fill(img, kWhite);
    draw_axes(img, f, xs, 5);
    for (size_t i = 1; i < xs.size(); ++i)
        draw_line(img, f.tx(xs[i - 1]), f.ty(ys[i - 1]), f.tx(xs[i]), f.ty(ys[i]), color);
    for (size_t i = 0; i < xs.size(); ++i) draw_disc(img, f.tx(xs[i]), f.ty(ys[i]), 4.0, color);
    return img;
}

inline Image plot_eigen_spectrum(const EigenSpectrum& s) {
    if (s.eigenvalues.empty()) throw Error("plot: empty spectrum");
    const int n = static_cast<int>(s.eigenvalues.size());
    Frame f;
    f.x_min = 0.0;
    f.x_max = n;
    f.y_min = 0.0;
    f.y_max = std::max(*std::max_element(s.eigenvalues.begin(), s.eigenvalues.end()), 1e-30);
    Image img(f.width, f.height);
    fill(img, kWhite);
    std::vector<double> ticks;
    for (int i = 0; i < n; ++i) ticks.push_back(i + 0.5);
    for (int i = 0; i <= 5; ++i) {
        const double y = f.y_min + (f.y_max - f.y_min) * i / 5;
        draw_text(img, 4, static_cast<int>(f.ty(y)) - 3, format_tick(y), kBlack);
        draw_line(img, f.margin_left, f.ty(y), f.width - f.margin_right, f.ty(y), kGrid);
    }
    for (int i = 0; i < n; ++i) {
        const double xl = f.tx(i + 0.15), xr = f.tx(i + 0.85);
        const double yb = f.ty(0.0), yt = f.ty(s.eigenvalues[static_cast<size_t>(i)]);
        for (int x = static_cast<int>(xl); x <= static_cast<int>(xr); ++x)
            draw_line(img, x, yb, x, yt, kBlue);
        draw_text(img, static_cast<int>((xl + xr) / 2) - 3,
                  static_cast<int>(f.ty(0.0)) + 6, format_tick(i + 1), kBlack);
    }
    draw_line(img, f.margin_left, f.ty(0.0), f.width - f.margin_right, f.ty(0.0), kBlack);
    return img;
}

// Hue wheel for azimuth labels: rgb from angle in [0, 2pi).
inline Rgb azimuth_color(double azimuth) {
    const double h = azimuth / kTwoPi * 6.0;
    const int i = static_cast<int>(h) % 6;
    const float fpart = static_cast<float>(h - std::floor(h));
    switch (i) {
        case 0: return {1.0f, fpart, 0.0f};
        case 1: return {1.0f - fpart, 1.0f, 0.0f};
        case 2: return {0.0f, 1.0f, fpart};
        case 3: return {0.0f, 1.0f - fpart, 1.0f};
        case 4: return {fpart, 0.0f, 1.0f};
        default: return {1.0f, 0.0f, 1.0f - fpart};
    }
}

// Latent 2-D projection scatter, colored by viewpoint azimuth; elevation
// scales the marker from dark (low) to full color (high).
inline Image plot_projection(const Projection2D& p) {
    if (p.points.empty()) throw Error("plot: empty projection");
    std::vector<double> xs, ys;
    for (const auto& pt : p.points) {
        xs.push_back(pt[0]);
        ys.push_back(pt[1]);
    }
    const Frame f = frame_for(xs, ys, false);
    Image img(f.width, f.height);
    fill(img, kWhite);
    draw_axes(img, f, {f.x_min, (f.x_min + f.x_max) / 2, f.x_max}, 5);
    for (size_t i = 0; i < p.points.size(); ++i) {
        Rgb c = azimuth_color(p.azimuth[i]);
        const float scale =
            0.35f + 0.65f * static_cast<float>((p.elevation[i] + kPi / 2) / kPi);
        c.r *= scale;
        c.g *= scale;
        c.b *= scale;
        draw_disc(img, f.tx(xs[i]), f.ty(ys[i]), 3.5, c);
    }
    return img;
}

// Top-down orthographic view of the viewing sphere: radial distance encodes
// cos(elevation). Candidates in blue, current pose in green, goal ringed red.
inline Image plot_plan_sphere(const PlanResult& r) {
    if (r.ranked.empty()) throw Error("plot: empty plan");
    const int side = 480;
    Image img(side, side);
    fill(img, kWhite);
    const double cx = side / 2.0, cy = side / 2.0, rad = side / 2.0 - 24.0;
    draw_ring(img, cx, cy, rad, kBlack);
    draw_ring(img, cx, cy, rad / 2, kGrid);
    const auto place = [&](const Pose& pose) {
        const SphericalCoord c = spherical_from_position(pose.translation, Vec3::Zero());
        const double rr = rad * std::cos(c.elevation);
        return std::pair<double, double>{cx + rr * std::cos(c.azimuth),
                                         cy - rr * std::sin(c.azimuth)};
    };
    for (const Candidate& c : r.ranked) {
        const auto [x, y] = place(c.target);
        draw_disc(img, x, y, 5.0, kBlue);
    }
    const auto [cxp, cyp] = place(r.current);
    draw_disc(img, cxp, cyp, 6.0, kGreen);
    if (r.has_goal_pose) {
        const auto [gx, gy] = place(r.goal_pose);
        draw_disc(img, gx, gy, 6.0, kRed);
        draw_ring(img, gx, gy, 10.0, kRed);
        draw_ring(img, gx, gy, 11.0, kRed);
    }
    return img;
}

}  // namespace plot
}  // namespace symlab
