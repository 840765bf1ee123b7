#include "egoflow/camera.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "egoflow/rng.hpp"

namespace egoflow {
namespace {

TEST(Camera, ProjectOracle) {
    CameraIntrinsics k;
    k.fx = 900.0; k.fy = 905.0; k.cx = 368.0; k.cy = 216.0;
    const PixelPoint p = project({0.5, 1.8, 12.0}, k);
    EXPECT_NEAR(p.u, 405.5, 1e-12);
    EXPECT_NEAR(p.v, 351.75, 1e-12);
}

TEST(Camera, ProjectRejectsNonPositiveDepth) {
    const CameraIntrinsics k;
    EXPECT_THROW(project({0.0, 0.0, 0.0}, k), NonPositiveDepth);
    EXPECT_THROW(project({1.0, 1.0, -3.0}, k), NonPositiveDepth);
}

TEST(Camera, BackprojectOracle) {
    CameraIntrinsics k;
    k.fx = 800.0; k.fy = 800.0; k.cx = 640.0; k.cy = 512.0;
    const Point3D p = ground_plane_backproject({500.0, 700.0}, k, 2.0);
    EXPECT_NEAR(p.x, -1.4893617021276595, 1e-12);
    EXPECT_NEAR(p.y, 2.0, 0.0);
    EXPECT_NEAR(p.z, 8.5106382978723403, 1e-12);
}

TEST(Camera, BackprojectRejectsHorizon) {
    const CameraIntrinsics k;
    EXPECT_THROW(ground_plane_backproject({100.0, k.cy}, k, 2.0), AboveHorizon);
    EXPECT_THROW(ground_plane_backproject({100.0, k.cy - 50.0}, k, 2.0),
                 AboveHorizon);
}

TEST(Camera, ProjectBackprojectRoundtrip) {
    const CameraIntrinsics k;
    const double height = 1.7;
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Point3D p{rng.uniform(-12.0, 12.0), height, rng.uniform(3.0, 90.0)};
        const PixelPoint px = project(p, k);
        if (!(px.v > k.cy)) continue;
        const Point3D back = ground_plane_backproject(px, k, height);
        EXPECT_NEAR(back.x, p.x, 1e-9);
        EXPECT_NEAR(back.z, p.z, 1e-9);
    }
}

TEST(Camera, FoeTranslationRoundtrip) {
    const CameraIntrinsics k;
    const PixelPoint foe{368.0, 216.0};
    const Translation t = translation_from_foe(foe, k);
    EXPECT_NEAR(t.z, 1.0, 0.0);
    const PixelPoint back = foe_from_translation(t, k);
    EXPECT_NEAR(back.u, foe.u, 1e-9);
    EXPECT_NEAR(back.v, foe.v, 1e-9);
}

TEST(Camera, FoeRejectsNonForwardTranslation) {
    const CameraIntrinsics k;
    EXPECT_THROW(foe_from_translation({0.1, 0.1, 0.0}, k), NonForwardTranslation);
    EXPECT_THROW(foe_from_translation({0.1, 0.1, -1.0}, k), NonForwardTranslation);
}

TEST(Camera, ExpectedFlowOracle) {
    const FlowVector fv =
        expected_flow({768.0, 416.0}, 20.0, 13.89, 0.05, {368.0, 216.0});
    EXPECT_NEAR(fv.du, 14.389681696925749, 1e-9);
    EXPECT_NEAR(fv.dv, 7.1948408484628743, 1e-9);
    EXPECT_NEAR(fv.magnitude, 16.088153224455251, 1e-9);
    EXPECT_TRUE(fv.track_ok);
}

TEST(Camera, ExpectedFlowMatchesTwoFrameProjection) {
    // The first-order formula is exact under the z=1 ray convention: project
    // a ground point before and after the camera advances speed*dt in depth.
    const CameraIntrinsics k;
    const PixelPoint foe{500.0, 700.0};
    const Translation ray = translation_from_foe(foe, k);
    const double s = 9.5 * 0.05;
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Point3D p{rng.uniform(-8.0, 8.0), 2.0, rng.uniform(4.0, 60.0)};
        const PixelPoint a = project(p, k);
        const PixelPoint b =
            project({p.x - ray.x * s, p.y - ray.y * s, p.z - ray.z * s}, k);
        const FlowVector fv = expected_flow(a, p.z, 9.5, 0.05, foe);
        EXPECT_NEAR(fv.du, b.u - a.u, 1e-9);
        EXPECT_NEAR(fv.dv, b.v - a.v, 1e-9);
    }
}

TEST(Camera, ExpectedFlowDegenerateDepth) {
    const PixelPoint foe{368.0, 216.0};
    EXPECT_THROW(expected_flow({400.0, 300.0}, 0.5, 10.0, 0.05, foe),
                 DegenerateDepth);
    EXPECT_NO_THROW(expected_flow({400.0, 300.0}, 0.51, 10.0, 0.05, foe));
}

TEST(Camera, ExpectedFlowVanishesAtFoe) {
    const PixelPoint foe{368.0, 216.0};
    const FlowVector fv = expected_flow(foe, 20.0, 10.0, 0.05, foe);
    EXPECT_EQ(fv.du, 0.0);
    EXPECT_EQ(fv.dv, 0.0);
}

TEST(Camera, FrameInterval) {
    CameraIntrinsics k;
    k.fps = 20.0;
    EXPECT_NEAR(k.dt(), 0.05, 1e-15);
}

TEST(Camera, ValidateRejectsBadIntrinsics) {
    CameraIntrinsics k;
    k.fx = 0.0;
    EXPECT_THROW(k.validate(), ConfigError);
    k = {};
    k.cx = -1.0;
    EXPECT_THROW(k.validate(), ConfigError);
    k = {};
    k.cy = static_cast<double>(k.height);
    EXPECT_THROW(k.validate(), ConfigError);
    k = {};
    k.fps = 0.0;
    EXPECT_THROW(k.validate(), ConfigError);
    k = {};
    EXPECT_NO_THROW(k.validate());
}

}  // namespace
}  // namespace egoflow
