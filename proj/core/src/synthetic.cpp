#include "egoflow/synthetic.hpp"

#include <cmath>
#include <fstream>

#include "egoflow/errors.hpp"
#include "egoflow/rng.hpp"

namespace egoflow {

void SimulationConfig::validate() const {
    if (point_count < 1) {
        throw ConfigError("sim point_count must be >= 1");
    }
    if (!(reference_speed > 0.0)) {
        throw ConfigError("sim reference_speed must be positive");
    }
    if (lateral_range.min > lateral_range.max) {
        throw InvalidRange("lateral_range min exceeds max");
    }
    if (depth_range.min > depth_range.max) {
        throw InvalidRange("depth_range min exceeds max");
    }
    if (!(depth_range.min > 0.0)) {
        throw InvalidRange("depth_range must start in front of the camera");
    }
}

std::vector<Point3D> simulate_ground_points(const SimulationConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.rng_seed);
    std::vector<Point3D> points;
    points.reserve(static_cast<std::size_t>(cfg.point_count));
    for (int i = 0; i < cfg.point_count; ++i) {
        const double x = rng.uniform(cfg.lateral_range.min, cfg.lateral_range.max);
        const double z = rng.uniform(cfg.depth_range.min, cfg.depth_range.max);
        points.push_back({x, cfg.camera_height, z});
    }
    return points;
}

SyntheticField render_flow_field(const std::vector<Point3D>& points,
                                 const CameraIntrinsics& k, const PixelPoint& foe,
                                 double speed_kmh, double dt) {
    if (foe.u < 0.0 || foe.u >= k.width || foe.v < 0.0 || foe.v >= k.height) {
        throw ConfigError("foe outside image bounds");
    }
    if (!(speed_kmh > 0.0) || !(dt > 0.0)) {
        throw ConfigError("render needs positive speed and dt");
    }
    const Translation ray = translation_from_foe(foe, k);
    const double step = kmh_to_mps(speed_kmh) * dt;  // depth advance, ray.z == 1

    SyntheticField field;
    field.samples.reserve(points.size());
    const auto in_frame = [&k](const PixelPoint& p) {
        return p.u >= 0.0 && p.u < k.width && p.v >= 0.0 && p.v < k.height;
    };
    for (const Point3D& p : points) {
        const Point3D moved{p.x - ray.x * step, p.y - ray.y * step, p.z - step};
        if (p.z <= 0.0 || moved.z <= 0.0) {
            ++field.dropped;
            continue;
        }
        const PixelPoint a = project(p, k);
        const PixelPoint b = project(moved, k);
        if (!in_frame(a) || !in_frame(b)) {
            ++field.dropped;
            continue;
        }
        field.samples.push_back({a.u, a.v, std::hypot(b.u - a.u, b.v - a.v)});
    }
    return field;
}

void dump_csv(const SyntheticField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << "x1,x2,magnitude\n";
    for (const SyntheticSample& s : field.samples) {
        out << s.x1 << ',' << s.x2 << ',' << s.magnitude << '\n';
    }
}

}  // namespace egoflow
