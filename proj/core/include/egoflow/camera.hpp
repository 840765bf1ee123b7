#pragma once

#include <cmath>

#include "egoflow/errors.hpp"

namespace egoflow {

/// Pinhole camera parameters. Axis convention: x right, y down, z forward
/// (optical axis), matching image coordinates.
struct CameraIntrinsics {
    double fx = 900.0;   ///< focal length, pixels
    double fy = 900.0;   ///< focal length, pixels
    double cx = 640.0;   ///< principal point, pixels
    double cy = 512.0;   ///< principal point, pixels
    int width = 1280;
    int height = 1024;
    double fps = 20.0;

    /// Frame interval in seconds.
    double dt() const { return 1.0 / fps; }

    /// Throws ConfigError when any invariant is violated.
    void validate() const;
};

/// Camera-frame point, meters.
struct Point3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Continuous image coordinates, pixels.
struct PixelPoint {
    double u = 0.0;
    double v = 0.0;
};

/// Camera translation direction (unnormalized ray).
struct Translation {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// A sparse optical-flow observation.
struct FlowVector {
    PixelPoint base;       ///< feature position in the earlier frame
    double du = 0.0;       ///< displacement, pixels
    double dv = 0.0;
    double magnitude = 0.0;
    bool track_ok = true;
};

inline FlowVector make_flow(PixelPoint base, double du, double dv, bool ok = true) {
    return {base, du, dv, std::hypot(du, dv), ok};
}

/// u = fx*x/z + cx, v = fy*y/z + cy. Throws NonPositiveDepth for z <= 0.
PixelPoint project(const Point3D& p, const CameraIntrinsics& k);

/// Unique ground-plane point (y = camera_height) projecting to pt.
/// Throws AboveHorizon when pt.v <= cy.
Point3D ground_plane_backproject(const PixelPoint& pt, const CameraIntrinsics& k,
                                 double camera_height);

/// Image point the translation direction converges to.
/// Throws NonForwardTranslation when t.z <= 0.
PixelPoint foe_from_translation(const Translation& t, const CameraIntrinsics& k);

/// Inverse of foe_from_translation: the z=1 ray through the FOE,
/// t = ((u-cx)/fx, (v-cy)/fy, 1). Scaling this ray by speed*dt advances
/// the camera by exactly speed*dt in depth, which is the convention the
/// synthetic renderer and the first-order flow model below share.
Translation translation_from_foe(const PixelPoint& foe, const CameraIntrinsics& k);

/// First-order radial flow at pt for a static point at depth depth_z when the
/// camera advances speed*dt along the FOE ray:
///   d = (pt - foe) * speed*dt / (depth_z - speed*dt).
/// Exact for ground points under the z=1 ray convention above.
/// Throws DegenerateDepth unless depth_z > speed*dt.
FlowVector expected_flow(const PixelPoint& pt, double depth_z, double speed_mps,
                         double dt, const PixelPoint& foe);

}  // namespace egoflow
