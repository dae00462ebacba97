#pragma once

// Raster buffers and their on-disk formats:
//   color    -> binary PPM (P6, maxval 255)
//   depth    -> PFM (single channel, little-endian scale -1), +inf stored as 3.4e38
//   instance -> binary PGM (P5, maxval 65535, big-endian samples per Netpbm)
//   flow     -> "FLO1": magic, width/height as int32 LE, (du,dv) float32 pairs
//               row-major, then one validity byte per pixel

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "synmot/math.hpp"

namespace synmot {

struct Rgb {
    double r = 0.0, g = 0.0, b = 0.0;
    Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
    Rgb operator*(const Rgb& o) const { return {r * o.r, g * o.g, b * o.b}; }
    Rgb operator+(const Rgb& o) const { return {r + o.r, g + o.g, b + o.b}; }
    bool operator==(const Rgb& o) const { return r == o.r && g == o.g && b == o.b; }
    Rgb clamped() const { return {clamp01(r), clamp01(g), clamp01(b)}; }
};

template <typename T>
class Image {
  public:
    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    T& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    bool operator==(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
    }

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using ColorImage = Image<Rgb>;
using DepthImage = Image<double>;
using InstanceImage = Image<std::uint16_t>;
using FlowImage = Image<Vec2>;
using MaskImage = Image<std::uint8_t>;

inline constexpr float kPfmInfinity = 3.4e38f;

namespace io {

inline void fail(const std::string& what) { throw std::runtime_error(what); }

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("cannot open for writing: " + path);
    return f;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("cannot open for reading: " + path);
    return f;
}

inline void write_ppm(const std::string& path, const ColorImage& img) {
    auto f = open_out(path);
    f << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<size_t>(img.width()) * 3);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const Rgb c = img.at(x, y).clamped();
            row[x * 3 + 0] = static_cast<std::uint8_t>(c.r * 255.0 + 0.5);
            row[x * 3 + 1] = static_cast<std::uint8_t>(c.g * 255.0 + 0.5);
            row[x * 3 + 2] = static_cast<std::uint8_t>(c.b * 255.0 + 0.5);
        }
        f.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!f) fail("write failed: " + path);
}

inline void write_pgm16(const std::string& path, const InstanceImage& img) {
    auto f = open_out(path);
    f << "P5\n" << img.width() << " " << img.height() << "\n65535\n";
    std::vector<std::uint8_t> row(static_cast<size_t>(img.width()) * 2);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::uint16_t v = img.at(x, y);
            row[x * 2 + 0] = static_cast<std::uint8_t>(v >> 8);
            row[x * 2 + 1] = static_cast<std::uint8_t>(v & 0xFF);
        }
        f.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!f) fail("write failed: " + path);
}

inline InstanceImage read_pgm16(const std::string& path) {
    auto f = open_in(path);
    std::string magic;
    int w, h, maxv;
    f >> magic >> w >> h >> maxv;
    if (magic != "P5" || maxv != 65535) fail("not a 16-bit P5 PGM: " + path);
    f.get();
    InstanceImage img(w, h);
    std::vector<std::uint8_t> row(static_cast<size_t>(w) * 2);
    for (int y = 0; y < h; ++y) {
        f.read(reinterpret_cast<char*>(row.data()), row.size());
        for (int x = 0; x < w; ++x)
            img.at(x, y) = static_cast<std::uint16_t>((row[x * 2] << 8) | row[x * 2 + 1]);
    }
    if (!f) fail("truncated PGM: " + path);
    return img;
}

inline void write_pfm(const std::string& path, const DepthImage& img) {
    auto f = open_out(path);
    // Scale -1 marks little-endian. PFM rows are stored bottom-up.
    f << "Pf\n" << img.width() << " " << img.height() << "\n-1.0\n";
    std::vector<float> row(img.width());
    for (int y = img.height() - 1; y >= 0; --y) {
        for (int x = 0; x < img.width(); ++x) {
            double d = img.at(x, y);
            row[x] = std::isinf(d) ? kPfmInfinity : static_cast<float>(d);
        }
        f.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
    }
    if (!f) fail("write failed: " + path);
}

inline DepthImage read_pfm(const std::string& path) {
    auto f = open_in(path);
    std::string magic;
    int w, h;
    double scale;
    f >> magic >> w >> h >> scale;
    if (magic != "Pf" || scale >= 0.0) fail("not a little-endian grayscale PFM: " + path);
    f.get();
    DepthImage img(w, h);
    std::vector<float> row(w);
    for (int y = h - 1; y >= 0; --y) {
        f.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
        for (int x = 0; x < w; ++x)
            img.at(x, y) = row[x] >= kPfmInfinity ? kInfDepth : static_cast<double>(row[x]);
    }
    if (!f) fail("truncated PFM: " + path);
    return img;
}

inline void write_flo(const std::string& path, const FlowImage& flow, const MaskImage& valid) {
    auto f = open_out(path);
    f.write("FLO1", 4);
    std::int32_t w = flow.width(), h = flow.height();
    f.write(reinterpret_cast<const char*>(&w), 4);
    f.write(reinterpret_cast<const char*>(&h), 4);
    std::vector<float> row(static_cast<size_t>(w) * 2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            row[x * 2 + 0] = static_cast<float>(flow.at(x, y).x);
            row[x * 2 + 1] = static_cast<float>(flow.at(x, y).y);
        }
        f.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
    }
    for (int y = 0; y < h; ++y)
        f.write(reinterpret_cast<const char*>(&valid.at(0, y)), w);
    if (!f) fail("write failed: " + path);
}

inline std::pair<FlowImage, MaskImage> read_flo(const std::string& path) {
    auto f = open_in(path);
    char magic[4];
    f.read(magic, 4);
    if (std::string(magic, 4) != "FLO1") fail("bad flow magic: " + path);
    std::int32_t w, h;
    f.read(reinterpret_cast<char*>(&w), 4);
    f.read(reinterpret_cast<char*>(&h), 4);
    FlowImage flow(w, h);
    MaskImage valid(w, h);
    std::vector<float> row(static_cast<size_t>(w) * 2);
    for (int y = 0; y < h; ++y) {
        f.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
        for (int x = 0; x < w; ++x) flow.at(x, y) = {row[x * 2], row[x * 2 + 1]};
    }
    for (int y = 0; y < h; ++y)
        f.read(reinterpret_cast<char*>(&valid.at(0, y)), w);
    if (!f) fail("truncated flow file: " + path);
    return {std::move(flow), std::move(valid)};
}

}  // namespace io
}  // namespace synmot
