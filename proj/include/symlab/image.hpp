#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "symlab/errors.hpp"

namespace symlab {

// RGB image with values in [0,1], row-major, interleaved channels.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;  // size = height * width * 3

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3, 0.0f) {}

    float& at(int y, int x, int c) { return pixels[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    float at(int y, int x, int c) const {
        return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
    }

    size_t size() const { return pixels.size(); }

    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

inline float max_abs_diff(const Image& a, const Image& b) {
    float m = 0.0f;
    for (size_t i = 0; i < a.pixels.size(); ++i)
        m = std::max(m, std::abs(a.pixels[i] - b.pixels[i]));
    return m;
}

inline float mean_abs_diff(const Image& a, const Image& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.pixels.size(); ++i) s += std::abs(a.pixels[i] - b.pixels[i]);
    return static_cast<float>(s / static_cast<double>(a.pixels.size()));
}

inline float mean_squared_error(const Image& a, const Image& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        s += d * d;
    }
    return static_cast<float>(s / static_cast<double>(a.pixels.size()));
}

inline uint8_t quantize8(float v) {
    const float c = std::clamp(v, 0.0f, 1.0f);
    return static_cast<uint8_t>(std::lround(c * 255.0f));
}

// Binary PPM (P6), 8 bits per channel. Lossless for 8-bit data and
// byte-deterministic, which the dataset format relies on.
inline void write_ppm(const std::filesystem::path& path, const Image& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_ppm: cannot open " + path.string());
    f << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<uint8_t> row(static_cast<size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) row[static_cast<size_t>(x) * 3 + c] = quantize8(img.at(y, x, c));
        f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!f) throw Error("write_ppm: write failed for " + path.string());
}

inline Image read_ppm(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("read_ppm: cannot open " + path.string());
    std::string magic;
    f >> magic;
    if (magic != "P6") throw Error("read_ppm: not a P6 file: " + path.string());
    int w = 0, h = 0, maxval = 0;
    f >> w >> h >> maxval;
    if (w <= 0 || h <= 0 || maxval != 255)
        throw Error("read_ppm: unsupported header in " + path.string());
    f.get();  // single whitespace after header
    Image img(w, h);
    std::vector<uint8_t> buf(static_cast<size_t>(w) * h * 3);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!f) throw Error("read_ppm: truncated file " + path.string());
    for (size_t i = 0; i < buf.size(); ++i) img.pixels[i] = static_cast<float>(buf[i]) / 255.0f;
    return img;
}

}  // namespace symlab
