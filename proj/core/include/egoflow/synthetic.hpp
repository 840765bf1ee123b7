#pragma once

#include <cstdint>
#include <vector>

#include "egoflow/camera.hpp"

namespace egoflow {

/// Closed interval of meters.
struct Range {
    double min = 0.0;
    double max = 0.0;
};

/// One synthetic training sample: image position of a projected ground
/// point and its flow magnitude at the reference speed.
struct SyntheticSample {
    double x1 = 0.0;        ///< pixel u
    double x2 = 0.0;        ///< pixel v
    double magnitude = 0.0; ///< pixels
};

struct SimulationConfig {
    int point_count = 2000;
    double reference_speed = 50.0;  ///< km/h
    double camera_height = 2.0;     ///< meters
    Range lateral_range{-10.0, 10.0};
    Range depth_range{5.0, 80.0};
    std::uint64_t rng_seed = 1;

    /// Throws InvalidRange / ConfigError.
    void validate() const;
};

struct SyntheticField {
    std::vector<SyntheticSample> samples;
    int dropped = 0;  ///< points behind the camera or projected off-frame
};

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

/// Ground-plane points: x uniform in lateral_range, z uniform in
/// depth_range, y = camera_height. Deterministic in rng_seed.
std::vector<Point3D> simulate_ground_points(const SimulationConfig& cfg);

/// Projects each point in two consecutive frames under a constant-velocity
/// translation along the FOE ray (depth advance speed*dt per frame) and
/// keeps the exact two-frame displacement magnitude. Points that leave the
/// frame or pass behind the camera are dropped silently and counted.
SyntheticField render_flow_field(const std::vector<Point3D>& points,
                                 const CameraIntrinsics& k, const PixelPoint& foe,
                                 double speed_kmh, double dt);

/// CSV rows "x1,x2,magnitude" for offline inspection.
void dump_csv(const SyntheticField& field, const std::string& path);

}  // namespace egoflow
