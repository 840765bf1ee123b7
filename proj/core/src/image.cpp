#include "egoflow/image.hpp"

#include <algorithm>
#include <cmath>

namespace egoflow {

float GrayImage::bilinear(double x, double y) const {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double ax = x - x0;
    const double ay = y - y0;
    const float* row0 = pixels_.data() + static_cast<std::size_t>(y0) * width_ + x0;
    const float* row1 = row0 + width_;
    const double top = row0[0] + ax * (row0[1] - row0[0]);
    const double bot = row1[0] + ax * (row1[1] - row1[0]);
    return static_cast<float>(top + ay * (bot - top));
}

bool GrayImage::window_inside(double x, double y, int radius) const {
    return x - radius >= 0.0 && y - radius >= 0.0 &&
           x + radius < width_ - 1 && y + radius < height_ - 1;
}

RgbImage RgbImage::from_gray(const GrayImage& g) {
    RgbImage out(g.width(), g.height());
    const auto& src = g.pixels();
    auto& dst = out.pixels_;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto v = static_cast<std::uint8_t>(std::clamp(src[i], 0.0f, 255.0f) + 0.5f);
        dst[i * 3] = v;
        dst[i * 3 + 1] = v;
        dst[i * 3 + 2] = v;
    }
    return out;
}

}  // namespace egoflow
