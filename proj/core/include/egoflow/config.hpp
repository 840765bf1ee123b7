#pragma once

#include <string>
#include <vector>

#include "egoflow/camera.hpp"
#include "egoflow/foe.hpp"
#include "egoflow/optical_flow.hpp"
#include "egoflow/synthetic.hpp"

namespace egoflow {

/// One "key = value" line from a sectioned config file, in file order.
/// Each "[section]" header is emitted too, as an entry with an empty key,
/// so consumers that care about section multiplicity (scenario patches)
/// can see the boundaries.
struct ConfigEntry {
    std::string section;
    std::string key;    ///< empty for a section header
    std::string value;
    int line = 0;

    bool is_header() const { return key.empty(); }
};

/// Parses "[section]" headers and "key = value" pairs; '#' starts a
/// comment. Throws ConfigError with the offending line number.
std::vector<ConfigEntry> parse_config_text(const std::string& text);
std::vector<ConfigEntry> parse_config_file(const std::string& path);

/// Typed value helpers shared by config and scenario loading.
double entry_double(const ConfigEntry& e);
int entry_int(const ConfigEntry& e);
bool entry_bool(const ConfigEntry& e);
std::uint64_t entry_seed(const ConfigEntry& e);

/// Applies one [camera] entry; false when the key is not a camera key.
bool apply_camera_entry(CameraIntrinsics& k, const ConfigEntry& e);

struct PipelineConfig {
    CameraIntrinsics camera;
    LkParams lk;
    int max_features = 800;
    double quality_ratio = 0.01;
    double min_distance = 8.0;
    double foe_percentile = 0.90;
    DistanceMetric foe_metric = DistanceMetric::PointToLine;
    SimulationConfig sim;
    double k_sigma = 2.5;
    int grid_nx = 16;
    int grid_ny = 12;
    bool refit_per_frame = true;

    /// Throws ConfigError / InvalidRange; this is what calib-check runs.
    void validate() const;
};

/// Sections: [camera], [lk], [foe], [sim], [classify]. Unknown sections or
/// keys are errors so typos surface instead of silently using defaults.
PipelineConfig pipeline_config_from_entries(const std::vector<ConfigEntry>& entries);
PipelineConfig load_pipeline_config(const std::string& path);

}  // namespace egoflow
