#pragma once

#include <string>
#include <vector>

#include "egoflow/config.hpp"
#include "egoflow/image.hpp"
#include "egoflow/regression.hpp"

namespace egoflow {

/// Outcome of one adjacent frame pair, indexed by the earlier frame.
struct FrameResult {
    int frame_index = 0;
    std::string frame_name;
    PixelPoint foe;
    double foe_threshold = 0.0;
    SpeedEstimate speed;
    std::vector<LabeledVector> labeled;
    int dropped_synthetic = 0;
    double timing_ms = 0.0;  ///< wall time for the pair; never serialized
    std::string error;       ///< empty on success

    bool ok() const { return error.empty(); }
};

struct RunOptions {
    std::string out_dir;     ///< empty: no files written
    bool overlays = false;   ///< write <frame>.overlay.png next to results
    std::string jsonl_path;  ///< empty: <out_dir>/results.jsonl when out_dir set
};

/// Processes every adjacent pair in lexicographic frame order: feature
/// detection on the earlier frame, LK flow, FOE estimate, synthetic render
/// at that FOE, regression fit (or reuse per refit_per_frame), speed from a
/// uniform subsample of the inliers, classification. A failing pair
/// (degenerate geometry, an unreadable or wrong-sized frame) yields an
/// error-carrying FrameResult and the run continues with the next loadable
/// pair. Throws NoFrames when the directory holds fewer than two frames.
std::vector<FrameResult> run_sequence(const std::string& frame_dir,
                                      const PipelineConfig& cfg,
                                      const RunOptions& opts = {});

/// One JSON line per FrameResult, vectors encoded as
/// [u, v, du, dv, label, residual]. Stable across runs byte for byte.
void write_results_jsonl(const std::vector<FrameResult>& results,
                         const std::string& path);

/// Grayscale frame promoted to RGB with each vector drawn base to
/// base+displacement (2 px arrowhead): outliers pure red, static inliers
/// pure green, moving pure blue; the FOE as a yellow cross. Segments are
/// clipped at the frame edge.
RgbImage render_overlay(const GrayImage& frame,
                        const std::vector<LabeledVector>& results,
                        const PixelPoint& foe);

}  // namespace egoflow
