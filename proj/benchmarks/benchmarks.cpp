// Stage-level timings against the 50 ms frame-pair budget on full-size
// 1280x1024 frames, plus the FOE estimator on its own since the
// leave-one-out pass is the only quadratic-looking stage.

#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "egoflow/config.hpp"
#include "egoflow/foe.hpp"
#include "egoflow/image_io.hpp"
#include "egoflow/optical_flow.hpp"
#include "egoflow/pipeline.hpp"
#include "egoflow/regression.hpp"
#include "egoflow/rng.hpp"
#include "egoflow/scenario.hpp"
#include "egoflow/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace egoflow;

struct PairData {
    GrayImage a;
    GrayImage b;
    PipelineConfig cfg;
    std::vector<Point3D> points;
};

// One rendered frame pair, shared by every benchmark in the process.
const PairData& pair_data() {
    static const PairData data = [] {
        Scenario sc;
        sc.frames = 2;
        sc.foe = {368.0, 512.0};
        sc.speed = {30.0, 30.0};
        sc.world = {-4.0, 4.0, 12.0, 18.0, 20.0};
        sc.patches.push_back({20.45, -2.32, 40, 3.0, 99});

        const fs::path dir = fs::temp_directory_path() / "egoflow_bench_frames";
        fs::remove_all(dir);
        generate_synthetic_sequence(sc, dir.string());

        PairData d;
        d.a = load_gray((dir / "frame_000.pgm").string());
        d.b = load_gray((dir / "frame_001.pgm").string());
        d.cfg.lk.levels = 4;
        d.cfg.sim.depth_range = {8.0, 18.5};
        d.cfg.sim.lateral_range = {-5.5, 5.5};
        d.points = simulate_ground_points(d.cfg.sim);
        fs::remove_all(dir);
        return d;
    }();
    return data;
}

std::vector<FlowVector> radial_field(int count) {
    const PixelPoint foe{368.0, 216.0};
    Rng rng(7);
    std::vector<FlowVector> field;
    field.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double radius = rng.uniform(200.0, 480.0);
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double kappa = rng.uniform(0.05, 0.15);
        const double bu = foe.u + radius * std::cos(angle) + 0.3 * rng.gaussian();
        const double bv = foe.v + radius * std::sin(angle) + 0.3 * rng.gaussian();
        field.push_back(make_flow({bu, bv}, kappa * (bu - foe.u),
                                  kappa * (bv - foe.v)));
    }
    return field;
}

void BM_DetectFeatures(benchmark::State& state) {
    const PairData& d = pair_data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_features(
            d.a, d.cfg.max_features, d.cfg.quality_ratio, d.cfg.min_distance));
    }
}
BENCHMARK(BM_DetectFeatures)->Unit(benchmark::kMillisecond);

void BM_BuildPyramid(benchmark::State& state) {
    const PairData& d = pair_data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_pyramid(d.a, d.cfg.lk.levels));
    }
}
BENCHMARK(BM_BuildPyramid)->Unit(benchmark::kMillisecond);

void BM_LucasKanade(benchmark::State& state) {
    const PairData& d = pair_data();
    const std::vector<PixelPoint> features = detect_features(
        d.a, d.cfg.max_features, d.cfg.quality_ratio, d.cfg.min_distance);
    const Pyramid pa = build_pyramid(d.a, d.cfg.lk.levels);
    const Pyramid pb = build_pyramid(d.b, d.cfg.lk.levels);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lucas_kanade(pa, pb, features, d.cfg.lk));
    }
    state.counters["features"] = static_cast<double>(features.size());
}
BENCHMARK(BM_LucasKanade)->Unit(benchmark::kMillisecond);

void BM_EstimateFoe(benchmark::State& state) {
    const std::vector<FlowVector> field =
        radial_field(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_foe(field, 0.90));
    }
}
BENCHMARK(BM_EstimateFoe)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RenderFlowField(benchmark::State& state) {
    const PairData& d = pair_data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_flow_field(d.points, d.cfg.camera,
                                                   {368.0, 512.0},
                                                   d.cfg.sim.reference_speed,
                                                   d.cfg.camera.dt()));
    }
}
BENCHMARK(BM_RenderFlowField)->Unit(benchmark::kMillisecond);

void BM_FitRegression(benchmark::State& state) {
    const PairData& d = pair_data();
    const SyntheticField field =
        render_flow_field(d.points, d.cfg.camera, {368.0, 512.0},
                          d.cfg.sim.reference_speed, d.cfg.camera.dt());
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(field.samples, d.cfg.sim.reference_speed));
    }
}
BENCHMARK(BM_FitRegression)->Unit(benchmark::kMillisecond);

// Everything timing_ms covers for one pair, minus file IO.
void BM_FramePair(benchmark::State& state) {
    const PairData& d = pair_data();
    const PipelineConfig& cfg = d.cfg;
    for (auto _ : state) {
        const std::vector<PixelPoint> features = detect_features(
            d.a, cfg.max_features, cfg.quality_ratio, cfg.min_distance);
        const Pyramid pa = build_pyramid(d.a, cfg.lk.levels);
        const Pyramid pb = build_pyramid(d.b, cfg.lk.levels);
        const std::vector<FlowVector> flows =
            lucas_kanade(pa, pb, features, cfg.lk);
        const FoeEstimate foe =
            estimate_foe(flows, cfg.foe_percentile, cfg.foe_metric);
        const SyntheticField field =
            render_flow_field(d.points, cfg.camera, foe.point,
                              cfg.sim.reference_speed, cfg.camera.dt());
        const RegressionModel model = fit(field.samples, cfg.sim.reference_speed);
        std::vector<FlowVector> inliers;
        for (std::size_t i = 0; i < flows.size(); ++i) {
            if (foe.inlier_mask[i]) {
                inliers.push_back(flows[i]);
            }
        }
        const SpeedEstimate speed = estimate_speed(
            uniform_sample(inliers, cfg.grid_nx, cfg.grid_ny, cfg.camera.width,
                           cfg.camera.height),
            model);
        benchmark::DoNotOptimize(
            classify(flows, foe, model, speed.ratio, cfg.k_sigma));
    }
}
BENCHMARK(BM_FramePair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
