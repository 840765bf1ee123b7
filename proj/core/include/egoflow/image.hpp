#pragma once

#include <cstdint>
#include <vector>

#include "egoflow/errors.hpp"

namespace egoflow {

/// Row-major grayscale image. Values live in [0, 255]; storage is float so
/// that pyramid levels keep fractional means (a 0/255 checkerboard averages
/// to 127.5) and gradients need no further promotion.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, float fill = 0.0f)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    float at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    float& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    const std::vector<float>& pixels() const { return pixels_; }
    std::vector<float>& pixels() { return pixels_; }

    /// Bilinear sample at continuous coordinates; caller keeps (x, y) within
    /// [0, width-2] x [0, height-2] plus fractional part.
    float bilinear(double x, double y) const;

    /// True when the whole square window [x-r, x+r] x [y-r, y+r] around a
    /// continuous center lies strictly inside the interpolatable area.
    bool window_inside(double x, double y, int radius) const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> pixels_;
};

/// Interleaved 8-bit RGB image, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * height * 3, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t* px(int x, int y) {
        return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    }
    const std::uint8_t* px(int x, int y) const {
        return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = px(x, y);
        p[0] = r; p[1] = g; p[2] = b;
    }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    static RgbImage from_gray(const GrayImage& g);

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

}  // namespace egoflow
