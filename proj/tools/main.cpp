#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "egoflow/config.hpp"
#include "egoflow/errors.hpp"
#include "egoflow/pipeline.hpp"
#include "egoflow/scenario.hpp"

namespace {

int cmd_run(const std::string& frame_dir, const std::string& config_path,
            const std::string& out_dir, bool overlay, const std::string& jsonl) {
    const egoflow::PipelineConfig cfg = egoflow::load_pipeline_config(config_path);
    egoflow::RunOptions opts;
    opts.out_dir = out_dir;
    opts.overlays = overlay;
    opts.jsonl_path = jsonl;

    const std::vector<egoflow::FrameResult> results =
        egoflow::run_sequence(frame_dir, cfg, opts);

    int failed = 0;
    for (const egoflow::FrameResult& r : results) {
        if (!r.ok()) {
            ++failed;
            std::printf("pair %3d %-24s error: %s\n", r.frame_index,
                        r.frame_name.c_str(), r.error.c_str());
            continue;
        }
        int moving = 0;
        int outliers = 0;
        for (const egoflow::LabeledVector& lv : r.labeled) {
            if (lv.label == egoflow::VectorLabel::Moving) ++moving;
            if (lv.label == egoflow::VectorLabel::Outlier) ++outliers;
        }
        std::printf(
            "pair %3d %-24s foe=(%7.1f,%7.1f) speed=%5.1f km/h "
            "vectors=%zu moving=%d outliers=%d %.1f ms\n",
            r.frame_index, r.frame_name.c_str(), r.foe.u, r.foe.v, r.speed.speed,
            r.labeled.size(), moving, outliers, r.timing_ms);
    }
    if (failed > 0) {
        std::fprintf(stderr, "%d of %zu pairs failed\n", failed, results.size());
        return 2;
    }
    return 0;
}

int cmd_synth(const std::string& scenario_path, const std::string& out_dir) {
    const egoflow::Scenario sc = egoflow::load_scenario(scenario_path);
    egoflow::generate_synthetic_sequence(sc, out_dir);
    std::printf("wrote %d frames and ground_truth.jsonl to %s\n", sc.frames,
                out_dir.c_str());
    return 0;
}

int cmd_calib_check(const std::string& config_path) {
    const egoflow::PipelineConfig cfg = egoflow::load_pipeline_config(config_path);
    cfg.validate();
    std::printf("config ok\n");
    std::printf("  camera  %dx%d fx=%.1f fy=%.1f c=(%.1f, %.1f) %.1f fps\n",
                cfg.camera.width, cfg.camera.height, cfg.camera.fx, cfg.camera.fy,
                cfg.camera.cx, cfg.camera.cy, cfg.camera.fps);
    std::printf("  lk      radius=%d levels=%d features<=%d\n",
                cfg.lk.window_radius, cfg.lk.levels, cfg.max_features);
    std::printf("  foe     percentile=%.2f metric=%s\n", cfg.foe_percentile,
                cfg.foe_metric == egoflow::DistanceMetric::PointToLine
                    ? "point_to_line"
                    : "point_to_point");
    std::printf("  sim     %d points %.0f km/h height=%.2f m\n",
                cfg.sim.point_count, cfg.sim.reference_speed,
                cfg.sim.camera_height);
    std::printf("  classify k_sigma=%.2f grid=%dx%d refit=%s\n", cfg.k_sigma,
                cfg.grid_nx, cfg.grid_ny, cfg.refit_per_frame ? "yes" : "no");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Background subtraction from a forward-moving camera"};
    app.require_subcommand(1);

    std::string frame_dir, config_path, out_dir, jsonl_path, scenario_path;
    bool overlay = false;

    CLI::App* run = app.add_subcommand("run", "Process a frame sequence");
    run->add_option("frame_dir", frame_dir, "Directory of PGM/PNG frames")
        ->required();
    run->add_option("--config", config_path, "Pipeline config file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--overlay", overlay, "Write overlay PNGs (needs --out)");
    run->add_option("--jsonl", jsonl_path, "Results JSONL path");

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
    synth->add_option("scenario_file", scenario_path, "Scenario description file")
        ->required();
    synth->add_option("--out", out_dir, "Output directory")->required();

    CLI::App* calib = app.add_subcommand("calib-check", "Validate a config file");
    calib->add_option("--config", config_path, "Pipeline config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            if (overlay && out_dir.empty()) {
                std::fprintf(stderr, "--overlay requires --out\n");
                return 1;
            }
            return cmd_run(frame_dir, config_path, out_dir, overlay, jsonl_path);
        }
        if (synth->parsed()) {
            return cmd_synth(scenario_path, out_dir);
        }
        return cmd_calib_check(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
