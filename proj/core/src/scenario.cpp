#include "egoflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "egoflow/config.hpp"
#include "egoflow/errors.hpp"
#include "egoflow/image.hpp"
#include "egoflow/image_io.hpp"
#include "egoflow/synthetic.hpp"

namespace egoflow {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    std::uint64_t h = seed;
    h = mix(h ^ static_cast<std::uint64_t>(ix));
    h = mix(h ^ static_cast<std::uint64_t>(iy));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Smoothstep-blended value noise on the unit lattice, in [0, 1).
double value_noise(double x, double y, std::uint64_t seed) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    double tx = x - fx;
    double ty = y - fy;
    tx = tx * tx * (3.0 - 2.0 * tx);
    ty = ty * ty * (3.0 - 2.0 * ty);
    const double v00 = lattice(ix, iy, seed);
    const double v10 = lattice(ix + 1, iy, seed);
    const double v01 = lattice(ix, iy + 1, seed);
    const double v11 = lattice(ix + 1, iy + 1, seed);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

// Road surface albedo at a world ground point, meters in, [0, 1) out.
// Depth cells stay at or above 0.18 m (finer detail would alias at the far
// end of the band and decorrelate between frames). Lateral cells are 6x
// finer: a forward camera compresses depth far more than width, so an
// isotropic pattern would project to tall thin edges with no corners for
// the detector to find.
double ground_texture(double x, double z, std::uint64_t seed) {
    const double a = value_noise(x * 6.0, z * 1.0, mix(seed));
    const double b = value_noise(x * 13.2 + 13.1, z * 2.2 + 7.9, mix(seed + 1));
    const double c = value_noise(x * 33.0 + 47.2, z * 5.5 + 29.8, mix(seed + 2));
    return 0.45 * a + 0.35 * b + 0.2 * c;
}

// Patch albedo in patch-local pixels; translates rigidly with the patch.
// Kept about as sharp as the projected ground texture so corner detection
// does not starve the band of features under the relative quality floor.
double patch_texture(double lu, double lv, std::uint64_t seed) {
    const double a = value_noise(lu / 16.0, lv / 16.0, mix(seed ^ 0x51edu));
    const double b = value_noise(lu / 6.0 + 31.7, lv / 6.0 + 11.3, mix(seed + 9));
    const double c = value_noise(lu / 2.8 + 7.4, lv / 2.8 + 23.9, mix(seed + 17));
    return 0.5 * a + 0.3 * b + 0.2 * c;
}

struct CameraState {
    double forward = 0.0;  // meters advanced along z since frame 0
    double lateral = 0.0;  // meters drifted along x
    double height = 0.0;   // meters above ground
};

}  // namespace

void Scenario::validate() const {
    camera.validate();
    if (frames < 2) {
        throw InvalidScenario("scenario needs at least 2 frames");
    }
    if (!(camera_height > 0.0)) {
        throw InvalidScenario("camera_height must be positive");
    }
    if (!(speed.start_kmh > 0.0) || !(speed.end_kmh > 0.0)) {
        throw InvalidScenario("speed profile must stay positive");
    }
    if (foe.u < 0.0 || foe.u >= camera.width || foe.v < 0.0 ||
        foe.v >= camera.height) {
        throw InvalidScenario("foe outside image bounds");
    }
    if (world.x_min >= world.x_max || world.z_min >= world.z_max ||
        !(world.z_min > 0.0)) {
        throw InvalidScenario("world band ranges are degenerate");
    }
    if (world.base_intensity < 0.0 || world.base_intensity > 255.0) {
        throw InvalidScenario("base_intensity outside [0, 255]");
    }
    for (const PatchSpec& p : patches) {
        if (!(p.z0 > 0.0) || p.half_px < 2 || !(p.gain > 0.0)) {
            throw InvalidScenario("patch needs z0 > 0, half_px >= 2, gain > 0");
        }
    }
}

Scenario load_scenario(const std::string& path) {
    Scenario sc;
    bool in_patch = false;
    for (const ConfigEntry& e : parse_config_file(path)) {
        if (e.is_header()) {
            in_patch = e.section == "patch";
            if (in_patch) {
                sc.patches.emplace_back();
            } else if (e.section != "scenario" && e.section != "camera" &&
                       e.section != "motion" && e.section != "world") {
                throw InvalidScenario("line " + std::to_string(e.line) +
                                      ": unknown section [" + e.section + "]");
            }
            continue;
        }
        const auto bad = [&e](const std::string& why) -> void {
            throw InvalidScenario("line " + std::to_string(e.line) + ": " + why);
        };
        if (e.section == "scenario") {
            if (e.key == "frames") sc.frames = entry_int(e);
            else if (e.key == "texture_seed") sc.texture_seed = entry_seed(e);
            else bad("unknown scenario key " + e.key);
        } else if (e.section == "camera") {
            if (!apply_camera_entry(sc.camera, e)) {
                bad("unknown camera key " + e.key);
            }
        } else if (e.section == "motion") {
            if (e.key == "speed_kmh") {
                sc.speed.start_kmh = entry_double(e);
                sc.speed.end_kmh = sc.speed.start_kmh;
            } else if (e.key == "speed_start_kmh") {
                sc.speed.start_kmh = entry_double(e);
            } else if (e.key == "speed_end_kmh") {
                sc.speed.end_kmh = entry_double(e);
            } else if (e.key == "foe_u") {
                sc.foe.u = entry_double(e);
            } else if (e.key == "foe_v") {
                sc.foe.v = entry_double(e);
            } else if (e.key == "camera_height") {
                sc.camera_height = entry_double(e);
            } else {
                bad("unknown motion key " + e.key);
            }
        } else if (e.section == "world") {
            if (e.key == "x_min") sc.world.x_min = entry_double(e);
            else if (e.key == "x_max") sc.world.x_max = entry_double(e);
            else if (e.key == "z_min") sc.world.z_min = entry_double(e);
            else if (e.key == "z_max") sc.world.z_max = entry_double(e);
            else if (e.key == "base_intensity") sc.world.base_intensity = entry_double(e);
            else bad("unknown world key " + e.key);
        } else if (e.section == "patch") {
            if (!in_patch || sc.patches.empty()) {
                bad("patch key outside a [patch] section");
            }
            PatchSpec& p = sc.patches.back();
            if (e.key == "z0") p.z0 = entry_double(e);
            else if (e.key == "x0") p.x0 = entry_double(e);
            else if (e.key == "half_px") p.half_px = entry_int(e);
            else if (e.key == "gain") p.gain = entry_double(e);
            else if (e.key == "seed") p.seed = entry_seed(e);
            else bad("unknown patch key " + e.key);
        } else {
            bad("unknown section [" + e.section + "]");
        }
    }
    sc.validate();
    return sc;
}

void generate_synthetic_sequence(const Scenario& sc, const std::string& out_dir) {
    sc.validate();
    std::filesystem::create_directories(out_dir);

    const CameraIntrinsics& k = sc.camera;
    const Translation ray = translation_from_foe(sc.foe, k);
    const double dt = k.dt();

    CameraState cam;
    cam.height = sc.camera_height;

    // Patch centers in image coordinates, advanced frame to frame. A patch
    // models an approaching object: its image scales about the focus of
    // expansion, so every patch pixel moves radially like the static field,
    // only faster. The cumulative scale grows with the per-frame gain.
    std::vector<PixelPoint> centers;
    std::vector<double> scales(sc.patches.size(), 1.0);
    centers.reserve(sc.patches.size());
    for (const PatchSpec& p : sc.patches) {
        centers.push_back(project({p.x0, cam.height, p.z0}, k));
    }

    std::ofstream truth(std::filesystem::path(out_dir) / "ground_truth.jsonl");
    if (!truth) {
        throw IoError("cannot write ground_truth.jsonl in " + out_dir);
    }

    GrayImage frame(k.width, k.height);
    for (int f = 0; f < sc.frames; ++f) {
        const float base = static_cast<float>(sc.world.base_intensity);
        std::fill(frame.pixels().begin(), frame.pixels().end(), base);

        // Ground band: back-project each below-horizon pixel at the current
        // camera pose, shift into world coordinates, sample the texture.
        // 3x3 supersampling approximates the pixel-footprint integral a real
        // sensor performs; point sampling would alias at the far end of the
        // band and break frame-to-frame consistency.
        static constexpr double kSub[3] = {-1.0 / 3.0, 0.0, 1.0 / 3.0};
        for (int v = 0; v < k.height; ++v) {
            bool row_in_band = false;
            for (double sv : kSub) {
                const double dv = v + sv - k.cy;
                if (dv < 1.0) {
                    continue;
                }
                const double z_w = k.fy * cam.height / dv + cam.forward;
                row_in_band = row_in_band ||
                              (z_w >= sc.world.z_min && z_w <= sc.world.z_max);
            }
            if (!row_in_band) {
                continue;
            }
            for (int u = 0; u < k.width; ++u) {
                double acc = 0.0;
                for (double sv : kSub) {
                    const double dv = v + sv - k.cy;
                    const double z_cam = dv >= 1.0 ? k.fy * cam.height / dv : 0.0;
                    const double z_w = z_cam + cam.forward;
                    const bool z_ok = dv >= 1.0 && z_w >= sc.world.z_min &&
                                      z_w <= sc.world.z_max;
                    for (double su : kSub) {
                        double sample = sc.world.base_intensity;
                        if (z_ok) {
                            const double x_w =
                                (u + su - k.cx) * z_cam / k.fx + cam.lateral;
                            if (x_w >= sc.world.x_min && x_w <= sc.world.x_max) {
                                sample = 25.0 + 200.0 * ground_texture(
                                                            x_w, z_w,
                                                            sc.texture_seed);
                            }
                        }
                        acc += sample;
                    }
                }
                frame.at(u, v) = static_cast<float>(acc / 9.0);
            }
        }

        // Moving patches occlude the ground.
        nlohmann::json rects = nlohmann::json::array();
        for (std::size_t i = 0; i < sc.patches.size(); ++i) {
            const PatchSpec& p = sc.patches[i];
            const PixelPoint& c = centers[i];
            const double s = scales[i];
            const double half = p.half_px * s;
            const int u0 = std::max(0, static_cast<int>(std::ceil(c.u - half)));
            const int v0 = std::max(0, static_cast<int>(std::ceil(c.v - half)));
            const int u1 =
                std::min(k.width - 1, static_cast<int>(std::floor(c.u + half)));
            const int v1 =
                std::min(k.height - 1, static_cast<int>(std::floor(c.v + half)));
            if (u0 > u1 || v0 > v1) {
                continue;  // fully out of frame
            }
            for (int v = v0; v <= v1; ++v) {
                for (int u = u0; u <= u1; ++u) {
                    double acc = 0.0;
                    for (double sv : kSub) {
                        for (double su : kSub) {
                            acc += patch_texture((u + su - c.u) / s,
                                                 (v + sv - c.v) / s, p.seed);
                        }
                    }
                    frame.at(u, v) = static_cast<float>(40.0 + 195.0 * acc / 9.0);
                }
            }
            rects.push_back({u0, v0, u1, v1});
        }

        char name[32];
        std::snprintf(name, sizeof(name), "frame_%03d.pgm", f);
        save_pgm(frame, (std::filesystem::path(out_dir) / name).string());

        const double speed_kmh = sc.speed.at(f, sc.frames);
        nlohmann::json rec;
        rec["frame"] = f;
        rec["file"] = name;
        rec["foe"] = {sc.foe.u, sc.foe.v};
        rec["speed_kmh"] = speed_kmh;
        rec["camera_height"] = cam.height;
        rec["moving_rects"] = rects;
        truth << rec.dump() << '\n';

        // Advance camera along its ray, and expand each patch about the focus
        // of expansion at gain times the local static flow, so patch vectors
        // stay direction-consistent with the field but break the ground model
        // on magnitude.
        const double step = kmh_to_mps(speed_kmh) * dt;
        for (std::size_t i = 0; i < sc.patches.size(); ++i) {
            PixelPoint& c = centers[i];
            const double dvc = c.v - k.cy;
            if (dvc < 1.0) {
                continue;
            }
            const double z_cam = k.fy * cam.height / dvc;
            if (z_cam - step <= 0.0) {
                continue;
            }
            const double grow = sc.patches[i].gain * step / (z_cam - step);
            c.u += grow * (c.u - sc.foe.u);
            c.v += grow * (c.v - sc.foe.v);
            scales[i] *= 1.0 + grow;
        }
        cam.forward += step;
        cam.lateral += ray.x * step;
        cam.height -= ray.y * step;
    }
}

}  // namespace egoflow
