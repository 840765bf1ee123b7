#include "egoflow/camera.hpp"

namespace egoflow {

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
        throw ConfigError("intrinsics: focal lengths must be positive");
    if (width <= 0 || height <= 0)
        throw ConfigError("intrinsics: resolution must be positive");
    if (!(cx >= 0.0) || !(cx < width) || !(cy >= 0.0) || !(cy < height))
        throw ConfigError("intrinsics: principal point outside the sensor");
    if (!(fps > 0.0))
        throw ConfigError("intrinsics: fps must be positive");
}

PixelPoint project(const Point3D& p, const CameraIntrinsics& k) {
    if (!(p.z > 0.0))
        throw NonPositiveDepth("project: point at or behind the camera");
    return {k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy};
}

Point3D ground_plane_backproject(const PixelPoint& pt, const CameraIntrinsics& k,
                                 double camera_height) {
    if (!(pt.v > k.cy))
        throw AboveHorizon("ground_plane_backproject: point at or above the horizon row");
    const double z = k.fy * camera_height / (pt.v - k.cy);
    const double x = (pt.u - k.cx) * z / k.fx;
    return {x, camera_height, z};
}

PixelPoint foe_from_translation(const Translation& t, const CameraIntrinsics& k) {
    if (!(t.z > 0.0))
        throw NonForwardTranslation("foe_from_translation: translation must have z > 0");
    return {k.fx * t.x / t.z + k.cx, k.fy * t.y / t.z + k.cy};
}

Translation translation_from_foe(const PixelPoint& foe, const CameraIntrinsics& k) {
    return {(foe.u - k.cx) / k.fx, (foe.v - k.cy) / k.fy, 1.0};
}

FlowVector expected_flow(const PixelPoint& pt, double depth_z, double speed_mps,
                         double dt, const PixelPoint& foe) {
    const double s = speed_mps * dt;
    if (!(depth_z > s))
        throw DegenerateDepth("expected_flow: depth_z must exceed speed*dt");
    const double gain = s / (depth_z - s);
    return make_flow(pt, (pt.u - foe.u) * gain, (pt.v - foe.v) * gain);
}

}  // namespace egoflow
