#pragma once

#include <vector>

#include "egoflow/camera.hpp"
#include "egoflow/image.hpp"

namespace egoflow {

/// Coarse-to-fine image stack; level 0 is full resolution, each level is a
/// 2x2 mean downsample of the previous one (dimensions floored).
struct Pyramid {
    std::vector<GrayImage> levels;

    int width() const { return levels.empty() ? 0 : levels.front().width(); }
    int height() const { return levels.empty() ? 0 : levels.front().height(); }
};

/// LK tracking parameters; the defaults are conventional.
struct LkParams {
    int window_radius = 10;   ///< 21x21 window
    int levels = 3;
    int max_iters = 30;
    double eps = 0.01;        ///< iteration stop, pixels
    double min_eig = 1e-4;    ///< singularity threshold, per window pixel
};

/// Smallest pyramid level dimension that still fits the default LK window.
inline constexpr int kMinPyramidLevelSize = 21;

/// Shi-Tomasi corners: minimum eigenvalue of the 3x3-aggregated gradient
/// structure tensor, greedy non-maximum suppression by descending score.
/// Every returned corner scores at least quality_ratio * best score and is
/// at least min_distance away from any stronger returned corner.
std::vector<PixelPoint> detect_features(const GrayImage& img, int max_count,
                                        double quality_ratio, double min_distance);

/// Throws TooManyLevels when a level would undercut kMinPyramidLevelSize.
Pyramid build_pyramid(const GrayImage& img, int levels);

/// Pyramidal Lucas-Kanade, one FlowVector per input feature (order
/// preserved). Failures are reported via track_ok = false: near-singular
/// gradient matrix, a window leaving the image at any level, or a
/// non-finite update. Throws GeometryMismatch when the pyramids disagree.
std::vector<FlowVector> lucas_kanade(const Pyramid& prev, const Pyramid& next,
                                     const std::vector<PixelPoint>& features,
                                     const LkParams& params = {});

}  // namespace egoflow
