#include "egoflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad_entry(const ConfigEntry& e, const std::string& why) {
    throw ConfigError("line " + std::to_string(e.line) + ": [" + e.section + "] " +
                      e.key + ": " + why);
}

}  // namespace

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            entries.push_back({section, "", "", line_no});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        ConfigEntry e;
        e.section = section;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<ConfigEntry> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

double entry_double(const ConfigEntry& e) {
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size()) {
            bad_entry(e, "trailing characters in number '" + e.value + "'");
        }
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_entry(e, "not a number: '" + e.value + "'");
    }
}

int entry_int(const ConfigEntry& e) {
    try {
        std::size_t used = 0;
        const long v = std::stol(e.value, &used);
        if (used != e.value.size()) {
            bad_entry(e, "trailing characters in integer '" + e.value + "'");
        }
        return static_cast<int>(v);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_entry(e, "not an integer: '" + e.value + "'");
    }
}

bool entry_bool(const ConfigEntry& e) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    bad_entry(e, "not a boolean: '" + e.value + "'");
}

std::uint64_t entry_seed(const ConfigEntry& e) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(e.value, &used);
        if (used != e.value.size()) {
            bad_entry(e, "trailing characters in seed '" + e.value + "'");
        }
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_entry(e, "not a seed: '" + e.value + "'");
    }
}

bool apply_camera_entry(CameraIntrinsics& k, const ConfigEntry& e) {
    if (e.key == "fx") k.fx = entry_double(e);
    else if (e.key == "fy") k.fy = entry_double(e);
    else if (e.key == "cx") k.cx = entry_double(e);
    else if (e.key == "cy") k.cy = entry_double(e);
    else if (e.key == "width") k.width = entry_int(e);
    else if (e.key == "height") k.height = entry_int(e);
    else if (e.key == "fps") k.fps = entry_double(e);
    else return false;
    return true;
}

PipelineConfig pipeline_config_from_entries(const std::vector<ConfigEntry>& entries) {
    PipelineConfig cfg;
    static const char* const kSections[] = {"camera", "lk", "foe", "sim", "classify"};
    for (const ConfigEntry& e : entries) {
        if (e.is_header()) {
            bool known = false;
            for (const char* s : kSections) {
                known = known || e.section == s;
            }
            if (!known) {
                bad_entry(e, "unknown section");
            }
            continue;
        }
        if (e.section == "camera") {
            if (!apply_camera_entry(cfg.camera, e)) {
                bad_entry(e, "unknown camera key");
            }
        } else if (e.section == "lk") {
            if (e.key == "window_radius") cfg.lk.window_radius = entry_int(e);
            else if (e.key == "levels") cfg.lk.levels = entry_int(e);
            else if (e.key == "max_iters") cfg.lk.max_iters = entry_int(e);
            else if (e.key == "eps") cfg.lk.eps = entry_double(e);
            else if (e.key == "min_eig") cfg.lk.min_eig = entry_double(e);
            else if (e.key == "max_features") cfg.max_features = entry_int(e);
            else if (e.key == "quality_ratio") cfg.quality_ratio = entry_double(e);
            else if (e.key == "min_distance") cfg.min_distance = entry_double(e);
            else bad_entry(e, "unknown lk key");
        } else if (e.section == "foe") {
            if (e.key == "percentile") {
                cfg.foe_percentile = entry_double(e);
            } else if (e.key == "metric") {
                if (e.value == "point_to_line") {
                    cfg.foe_metric = DistanceMetric::PointToLine;
                } else if (e.value == "point_to_point") {
                    cfg.foe_metric = DistanceMetric::PointToPoint;
                } else {
                    bad_entry(e, "metric must be point_to_line or point_to_point");
                }
            } else {
                bad_entry(e, "unknown foe key");
            }
        } else if (e.section == "sim") {
            if (e.key == "point_count") cfg.sim.point_count = entry_int(e);
            else if (e.key == "reference_speed") cfg.sim.reference_speed = entry_double(e);
            else if (e.key == "camera_height") cfg.sim.camera_height = entry_double(e);
            else if (e.key == "lateral_min") cfg.sim.lateral_range.min = entry_double(e);
            else if (e.key == "lateral_max") cfg.sim.lateral_range.max = entry_double(e);
            else if (e.key == "depth_min") cfg.sim.depth_range.min = entry_double(e);
            else if (e.key == "depth_max") cfg.sim.depth_range.max = entry_double(e);
            else if (e.key == "seed") cfg.sim.rng_seed = entry_seed(e);
            else bad_entry(e, "unknown sim key");
        } else if (e.section == "classify") {
            if (e.key == "k_sigma") cfg.k_sigma = entry_double(e);
            else if (e.key == "grid_nx") cfg.grid_nx = entry_int(e);
            else if (e.key == "grid_ny") cfg.grid_ny = entry_int(e);
            else if (e.key == "refit_per_frame") cfg.refit_per_frame = entry_bool(e);
            else bad_entry(e, "unknown classify key");
        } else {
            bad_entry(e, "unknown section");
        }
    }
    return cfg;
}

void PipelineConfig::validate() const {
    camera.validate();
    if (lk.window_radius < 1) throw ConfigError("lk window_radius must be >= 1");
    if (lk.levels < 1) throw ConfigError("lk levels must be >= 1");
    if (lk.max_iters < 1) throw ConfigError("lk max_iters must be >= 1");
    if (!(lk.eps > 0.0)) throw ConfigError("lk eps must be positive");
    if (lk.min_eig < 0.0) throw ConfigError("lk min_eig must be >= 0");
    if (max_features < 1) throw ConfigError("lk max_features must be >= 1");
    if (!(quality_ratio > 0.0) || quality_ratio > 1.0) {
        throw ConfigError("lk quality_ratio must be in (0, 1]");
    }
    if (min_distance < 0.0) throw ConfigError("lk min_distance must be >= 0");
    if (!(foe_percentile > 0.0) || foe_percentile > 1.0) {
        throw ConfigError("foe percentile must be in (0, 1]");
    }
    sim.validate();
    if (!(k_sigma > 0.0)) throw ConfigError("classify k_sigma must be positive");
    if (grid_nx < 1 || grid_ny < 1) {
        throw ConfigError("classify grid must be at least 1x1");
    }
}

PipelineConfig load_pipeline_config(const std::string& path) {
    return pipeline_config_from_entries(parse_config_file(path));
}

}  // namespace egoflow
