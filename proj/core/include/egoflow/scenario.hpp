#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egoflow/camera.hpp"

namespace egoflow {

/// A moving object: a textured square billboard anchored to a ground point,
/// whose image expands about the focus of expansion by `gain` times the
/// local static flow per frame. Every patch pixel therefore moves radially
/// (direction-consistent with the static field) at an anomalous magnitude,
/// which is exactly the signature the classifier is supposed to catch.
struct PatchSpec {
    double z0 = 20.0;  ///< anchor depth, meters, at frame 0
    double x0 = 0.0;   ///< anchor lateral offset, meters
    int half_px = 50;  ///< half side of the drawn square at frame 0, pixels
    double gain = 3.0; ///< multiple of the local static flow per frame
    std::uint64_t seed = 99;
};

/// World-fixed textured ground band; everything outside it renders as the
/// flat base intensity (untrackable on purpose). The far edge stays near
/// enough that static flows are a few pixels even at low speed; beyond
/// that the constraint directions get too noisy to anchor the FOE.
struct WorldBand {
    double x_min = -4.0;
    double x_max = 4.0;
    double z_min = 10.0;  ///< meters ahead of the frame-0 camera
    double z_max = 25.0;
    double base_intensity = 20.0;
};

/// Linear speed profile across the sequence, km/h.
struct SpeedProfile {
    double start_kmh = 15.0;
    double end_kmh = 15.0;

    double at(int frame, int frames) const {
        if (frames <= 1) return start_kmh;
        const double t = static_cast<double>(frame) / (frames - 1);
        return start_kmh + (end_kmh - start_kmh) * t;
    }
};

struct Scenario {
    int frames = 11;
    std::uint64_t texture_seed = 7;
    CameraIntrinsics camera;
    PixelPoint foe{368.0, 216.0};  ///< fixed heading; drives the camera ray
    double camera_height = 2.0;    ///< meters at frame 0
    SpeedProfile speed;
    WorldBand world;
    std::vector<PatchSpec> patches;

    void validate() const;  ///< throws InvalidScenario
};

/// Sections: [scenario], [camera], [motion], [world], and one [patch] per
/// moving object (repeatable).
Scenario load_scenario(const std::string& path);

/// Writes frame_###.pgm plus ground_truth.jsonl (per frame: true FOE, true
/// speed, camera height, and the moving-object rectangles) into out_dir.
void generate_synthetic_sequence(const Scenario& sc, const std::string& out_dir);

}  // namespace egoflow
