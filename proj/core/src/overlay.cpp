#include <cmath>
#include <cstdlib>

#include "egoflow/pipeline.hpp"

namespace egoflow {

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

constexpr Rgb kOutlier{255, 0, 0};
constexpr Rgb kStatic{0, 255, 0};
constexpr Rgb kMoving{0, 0, 255};
constexpr Rgb kFoe{255, 255, 0};

void plot(RgbImage& img, int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) {
        return;
    }
    img.set(x, y, c.r, c.g, c.b);
}

void draw_line(RgbImage& img, int x0, int y0, int x1, int y1, Rgb c) {
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        plot(img, x0, y0, c);
        if (x0 == x1 && y0 == y1) {
            break;
        }
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void draw_vector(RgbImage& img, const FlowVector& fv, Rgb c) {
    const int x0 = static_cast<int>(std::lround(fv.base.u));
    const int y0 = static_cast<int>(std::lround(fv.base.v));
    const int x1 = static_cast<int>(std::lround(fv.base.u + fv.du));
    const int y1 = static_cast<int>(std::lround(fv.base.v + fv.dv));
    draw_line(img, x0, y0, x1, y1, c);
    if (fv.magnitude <= 0.0) {
        return;
    }
    // Two 2 px barbs swept back from the tip.
    const double bu = -fv.du / fv.magnitude;
    const double bv = -fv.dv / fv.magnitude;
    const double cos_a = 0.8775825618903728;  // cos 0.5
    const double sin_a = 0.479425538604203;   // sin 0.5
    const double len = 2.0;
    const double b1u = len * (bu * cos_a - bv * sin_a);
    const double b1v = len * (bu * sin_a + bv * cos_a);
    const double b2u = len * (bu * cos_a + bv * sin_a);
    const double b2v = len * (-bu * sin_a + bv * cos_a);
    draw_line(img, x1, y1, static_cast<int>(std::lround(x1 + b1u)),
              static_cast<int>(std::lround(y1 + b1v)), c);
    draw_line(img, x1, y1, static_cast<int>(std::lround(x1 + b2u)),
              static_cast<int>(std::lround(y1 + b2v)), c);
}

}  // namespace

RgbImage render_overlay(const GrayImage& frame,
                        const std::vector<LabeledVector>& results,
                        const PixelPoint& foe) {
    RgbImage img = RgbImage::from_gray(frame);
    for (const LabeledVector& lv : results) {
        Rgb c = kOutlier;
        if (lv.label == VectorLabel::StaticInlier) {
            c = kStatic;
        } else if (lv.label == VectorLabel::Moving) {
            c = kMoving;
        }
        draw_vector(img, lv.vector, c);
    }
    const int fx = static_cast<int>(std::lround(foe.u));
    const int fy = static_cast<int>(std::lround(foe.v));
    const int arm = 6;
    draw_line(img, fx - arm, fy, fx + arm, fy, kFoe);
    draw_line(img, fx, fy - arm, fx, fy + arm, kFoe);
    return img;
}

}  // namespace egoflow
