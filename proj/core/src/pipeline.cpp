#include "egoflow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>

#include <nlohmann/json.hpp>

#include "egoflow/errors.hpp"
#include "egoflow/image_io.hpp"
#include "egoflow/optical_flow.hpp"

namespace egoflow {

namespace {

namespace fs = std::filesystem;

std::vector<fs::path> list_frames(const std::string& frame_dir) {
    if (!fs::is_directory(frame_dir)) {
        throw NoFrames(frame_dir + " is not a directory");
    }
    std::vector<fs::path> frames;
    for (const fs::directory_entry& entry : fs::directory_iterator(frame_dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".pgm" || ext == ".png") {
            frames.push_back(entry.path());
        }
    }
    std::sort(frames.begin(), frames.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });
    if (frames.size() < 2) {
        throw NoFrames("need at least 2 frames in " + frame_dir + ", found " +
                       std::to_string(frames.size()));
    }
    return frames;
}

GrayImage load_frame(const fs::path& path, const CameraIntrinsics& k) {
    GrayImage img = load_gray(path.string());
    if (img.width() != k.width || img.height() != k.height) {
        throw DimensionMismatch(path.filename().string() + " is " +
                                std::to_string(img.width()) + "x" +
                                std::to_string(img.height()) + ", config expects " +
                                std::to_string(k.width) + "x" +
                                std::to_string(k.height));
    }
    return img;
}

const char* label_name(VectorLabel label) {
    switch (label) {
        case VectorLabel::Outlier: return "outlier";
        case VectorLabel::StaticInlier: return "static";
        case VectorLabel::Moving: return "moving";
    }
    return "outlier";
}

}  // namespace

std::vector<FrameResult> run_sequence(const std::string& frame_dir,
                                      const PipelineConfig& cfg,
                                      const RunOptions& opts) {
    cfg.validate();
    const std::vector<fs::path> frames = list_frames(frame_dir);
    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
    }

    const std::vector<Point3D> points = simulate_ground_points(cfg.sim);
    RegressionModel model;
    bool have_model = false;

    std::vector<FrameResult> results;
    results.reserve(frames.size() - 1);

    // A frame that fails to load poisons both pairs it takes part in; each
    // pair gets its own error record and the next loadable pair resumes.
    GrayImage prev;
    std::size_t prev_index = frames.size();

    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();

        FrameResult r;
        r.frame_index = static_cast<int>(i);
        r.frame_name = frames[i].filename().string();
        std::optional<GrayImage> next;
        try {
            if (prev_index != i) {
                prev = load_frame(frames[i], cfg.camera);
                prev_index = i;
            }
            next = load_frame(frames[i + 1], cfg.camera);
            const std::vector<PixelPoint> features = detect_features(
                prev, cfg.max_features, cfg.quality_ratio, cfg.min_distance);
            const Pyramid pyr_prev = build_pyramid(prev, cfg.lk.levels);
            const Pyramid pyr_next = build_pyramid(*next, cfg.lk.levels);
            const std::vector<FlowVector> flows =
                lucas_kanade(pyr_prev, pyr_next, features, cfg.lk);

            const FoeEstimate foe = estimate_foe(flows, cfg.foe_percentile,
                                                 cfg.foe_metric);
            const SyntheticField field =
                render_flow_field(points, cfg.camera, foe.point,
                                  cfg.sim.reference_speed, cfg.camera.dt());
            if (cfg.refit_per_frame || !have_model) {
                model = fit(field.samples, cfg.sim.reference_speed);
                have_model = true;
            }

            std::vector<FlowVector> inliers;
            for (std::size_t j = 0; j < flows.size(); ++j) {
                if (foe.inlier_mask[j]) {
                    inliers.push_back(flows[j]);
                }
            }
            const std::vector<FlowVector> sampled = uniform_sample(
                inliers, cfg.grid_nx, cfg.grid_ny, cfg.camera.width,
                cfg.camera.height);
            const SpeedEstimate speed = estimate_speed(sampled, model);

            r.foe = foe.point;
            r.foe_threshold = foe.threshold;
            r.speed = speed;
            r.labeled = classify(flows, foe, model, speed.ratio, cfg.k_sigma);
            r.dropped_synthetic = field.dropped;
        } catch (const Error& e) {
            r.error = e.what();
        }
        r.timing_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

        if (r.ok() && opts.overlays && !opts.out_dir.empty()) {
            const RgbImage overlay = render_overlay(prev, r.labeled, r.foe);
            const std::string name = frames[i].stem().string() + ".overlay.png";
            save_png(overlay, (fs::path(opts.out_dir) / name).string());
        }
        results.push_back(std::move(r));
        if (next) {
            prev = std::move(*next);
            prev_index = i + 1;
        }
    }

    std::string jsonl = opts.jsonl_path;
    if (jsonl.empty() && !opts.out_dir.empty()) {
        jsonl = (fs::path(opts.out_dir) / "results.jsonl").string();
    }
    if (!jsonl.empty()) {
        write_results_jsonl(results, jsonl);
    }
    return results;
}

void write_results_jsonl(const std::vector<FrameResult>& results,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    for (const FrameResult& r : results) {
        nlohmann::json rec;
        rec["frame"] = r.frame_index;
        rec["file"] = r.frame_name;
        if (!r.ok()) {
            rec["error"] = r.error;
            out << rec.dump() << '\n';
            continue;
        }
        rec["foe"] = {r.foe.u, r.foe.v};
        rec["foe_threshold"] = r.foe_threshold;
        rec["speed_kmh"] = r.speed.speed;
        rec["speed_ratio"] = r.speed.ratio;
        rec["speed_samples"] = r.speed.sample_count;
        rec["dropped_synthetic"] = r.dropped_synthetic;
        nlohmann::json vectors = nlohmann::json::array();
        for (const LabeledVector& lv : r.labeled) {
            vectors.push_back({lv.vector.base.u, lv.vector.base.v, lv.vector.du,
                               lv.vector.dv, label_name(lv.label), lv.residual});
        }
        rec["vectors"] = std::move(vectors);
        out << rec.dump() << '\n';
    }
}

}  // namespace egoflow
