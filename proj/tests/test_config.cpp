#include "egoflow/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "egoflow/errors.hpp"

namespace egoflow {
namespace {

template <typename Fn>
std::string config_error_of(Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected ConfigError";
    return "";
}

const char* const kFullConfig = R"(# pipeline tuning
[camera]
fx = 450.5
fy = 455
cx = 320
cy = 240
width = 640
height = 480
fps = 25

[lk]
window_radius = 7
levels = 2
max_iters = 40
eps = 0.02
min_eig = 0.0005
max_features = 500
quality_ratio = 0.02
min_distance = 6.5

[foe]
percentile = 0.85
metric = point_to_point

[sim]
point_count = 1500
reference_speed = 60
camera_height = 1.8
lateral_min = -8
lateral_max = 8
depth_min = 6
depth_max = 70
seed = 77

[classify]
k_sigma = 3.0
grid_nx = 10
grid_ny = 8
refit_per_frame = no
)";

TEST(ParseConfig, EmitsHeadersAndTrimmedPairsWithLineNumbers) {
    const std::vector<ConfigEntry> entries = parse_config_text(
        "\n# prologue\n[camera]\n  fx =  900.5  # focal\n\nfy=901\n");
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_TRUE(entries[0].is_header());
    EXPECT_EQ(entries[0].section, "camera");
    EXPECT_EQ(entries[0].line, 3);
    EXPECT_EQ(entries[1].key, "fx");
    EXPECT_EQ(entries[1].value, "900.5");
    EXPECT_EQ(entries[1].line, 4);
    EXPECT_EQ(entries[2].key, "fy");
    EXPECT_EQ(entries[2].value, "901");
    EXPECT_EQ(entries[2].line, 6);
}

TEST(ParseConfig, ReportsMalformedLines) {
    EXPECT_NE(config_error_of([] { parse_config_text("a = 1\nno equals here\n"); })
                  .find("line 2: expected key = value"),
              std::string::npos);
    EXPECT_NE(config_error_of([] { parse_config_text("[camera]\n= 5\n"); })
                  .find("line 2: empty key"),
              std::string::npos);
    EXPECT_NE(config_error_of([] { parse_config_text("[camera\n"); })
                  .find("line 1: malformed section header"),
              std::string::npos);
    EXPECT_NE(config_error_of([] { parse_config_text("[]\n"); })
                  .find("malformed section header"),
              std::string::npos);
}

TEST(EntryHelpers, ParseAndRejectTrailingGarbage) {
    EXPECT_DOUBLE_EQ(entry_double({"s", "k", "2.5", 1}), 2.5);
    EXPECT_EQ(entry_int({"s", "k", "-3", 1}), -3);
    EXPECT_EQ(entry_seed({"s", "k", "12345678901234567890", 1}),
              12345678901234567890ull);
    EXPECT_TRUE(entry_bool({"s", "k", "TRUE", 1}));
    EXPECT_TRUE(entry_bool({"s", "k", "yes", 1}));
    EXPECT_TRUE(entry_bool({"s", "k", "1", 1}));
    EXPECT_FALSE(entry_bool({"s", "k", "false", 1}));
    EXPECT_FALSE(entry_bool({"s", "k", "no", 1}));
    EXPECT_FALSE(entry_bool({"s", "k", "0", 1}));

    EXPECT_THROW(entry_double({"s", "k", "2.5px", 9}), ConfigError);
    EXPECT_THROW(entry_double({"s", "k", "", 9}), ConfigError);
    EXPECT_THROW(entry_int({"s", "k", "3.5", 9}), ConfigError);
    EXPECT_THROW(entry_bool({"s", "k", "maybe", 9}), ConfigError);
    EXPECT_THROW(entry_seed({"s", "k", "7seven", 9}), ConfigError);
    EXPECT_NE(config_error_of([] { entry_int({"sim", "seed", "12x", 7}); })
                  .find("line 7: [sim] seed"),
              std::string::npos);
}

TEST(EntryHelpers, CameraKeysApplyAndUnknownFallsThrough) {
    CameraIntrinsics k;
    EXPECT_TRUE(apply_camera_entry(k, {"camera", "fx", "450.5", 1}));
    EXPECT_TRUE(apply_camera_entry(k, {"camera", "width", "640", 2}));
    EXPECT_DOUBLE_EQ(k.fx, 450.5);
    EXPECT_EQ(k.width, 640);
    EXPECT_FALSE(apply_camera_entry(k, {"camera", "zoom", "2", 3}));
}

TEST(PipelineConfig, FullFileSetsEveryField) {
    const PipelineConfig cfg =
        pipeline_config_from_entries(parse_config_text(kFullConfig));
    EXPECT_DOUBLE_EQ(cfg.camera.fx, 450.5);
    EXPECT_DOUBLE_EQ(cfg.camera.fy, 455.0);
    EXPECT_DOUBLE_EQ(cfg.camera.cx, 320.0);
    EXPECT_DOUBLE_EQ(cfg.camera.cy, 240.0);
    EXPECT_EQ(cfg.camera.width, 640);
    EXPECT_EQ(cfg.camera.height, 480);
    EXPECT_DOUBLE_EQ(cfg.camera.fps, 25.0);
    EXPECT_EQ(cfg.lk.window_radius, 7);
    EXPECT_EQ(cfg.lk.levels, 2);
    EXPECT_EQ(cfg.lk.max_iters, 40);
    EXPECT_DOUBLE_EQ(cfg.lk.eps, 0.02);
    EXPECT_DOUBLE_EQ(cfg.lk.min_eig, 0.0005);
    EXPECT_EQ(cfg.max_features, 500);
    EXPECT_DOUBLE_EQ(cfg.quality_ratio, 0.02);
    EXPECT_DOUBLE_EQ(cfg.min_distance, 6.5);
    EXPECT_DOUBLE_EQ(cfg.foe_percentile, 0.85);
    EXPECT_EQ(cfg.foe_metric, DistanceMetric::PointToPoint);
    EXPECT_EQ(cfg.sim.point_count, 1500);
    EXPECT_DOUBLE_EQ(cfg.sim.reference_speed, 60.0);
    EXPECT_DOUBLE_EQ(cfg.sim.camera_height, 1.8);
    EXPECT_DOUBLE_EQ(cfg.sim.lateral_range.min, -8.0);
    EXPECT_DOUBLE_EQ(cfg.sim.lateral_range.max, 8.0);
    EXPECT_DOUBLE_EQ(cfg.sim.depth_range.min, 6.0);
    EXPECT_DOUBLE_EQ(cfg.sim.depth_range.max, 70.0);
    EXPECT_EQ(cfg.sim.rng_seed, 77u);
    EXPECT_DOUBLE_EQ(cfg.k_sigma, 3.0);
    EXPECT_EQ(cfg.grid_nx, 10);
    EXPECT_EQ(cfg.grid_ny, 8);
    EXPECT_FALSE(cfg.refit_per_frame);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(PipelineConfig, RejectsTyposInsteadOfDefaulting) {
    EXPECT_NE(config_error_of([] {
                  pipeline_config_from_entries(
                      parse_config_text("[camera]\nzoom = 2\n"));
              }).find("unknown camera key"),
              std::string::npos);
    EXPECT_NE(config_error_of([] {
                  pipeline_config_from_entries(parse_config_text("[weird]\n"));
              }).find("unknown section"),
              std::string::npos);
    EXPECT_NE(config_error_of([] {
                  pipeline_config_from_entries(parse_config_text("fx = 900\n"));
              }).find("unknown section"),
              std::string::npos);
    EXPECT_NE(config_error_of([] {
                  pipeline_config_from_entries(
                      parse_config_text("[foe]\nmetric = nearest\n"));
              }).find("metric must be"),
              std::string::npos);
}

TEST(PipelineConfig, DefaultsValidate) {
    EXPECT_NO_THROW(PipelineConfig{}.validate());
}

TEST(PipelineConfig, ValidateRejectsOutOfRangeValues) {
    PipelineConfig cfg;
    cfg.foe_percentile = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.foe_percentile = 1.5;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.quality_ratio = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.grid_nx = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.k_sigma = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.lk.levels = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_features = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.camera.cx = -1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.sim.depth_range = {10.0, 5.0};
    EXPECT_THROW(cfg.validate(), InvalidRange);
}

TEST(PipelineConfig, LoadsFromFileAndReportsMissingPath) {
    const std::filesystem::path file =
        std::filesystem::temp_directory_path() / "egoflow_test_pipeline.cfg";
    {
        std::ofstream out(file);
        out << kFullConfig;
    }
    const PipelineConfig cfg = load_pipeline_config(file.string());
    EXPECT_EQ(cfg.camera.width, 640);
    EXPECT_DOUBLE_EQ(cfg.foe_percentile, 0.85);
    std::filesystem::remove(file);

    EXPECT_THROW(load_pipeline_config("/nonexistent/egoflow.cfg"), IoError);
}

}  // namespace
}  // namespace egoflow
