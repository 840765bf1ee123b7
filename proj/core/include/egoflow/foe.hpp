#pragma once

#include <vector>

#include "egoflow/camera.hpp"

namespace egoflow {

/// One flow vector as a line through its base point, parallel to the flow:
/// {h : alpha . h == beta} with alpha the unit normal. Every candidate
/// convergence point consistent with the vector lies on this line.
struct LineConstraint {
    double alpha_u = 0.0;
    double alpha_v = 0.0;
    double beta = 0.0;
};

/// How a removed vector is scored against the leave-one-out estimate.
/// PointToLine is the consensus residual and the default; PointToPoint
/// (estimate to the vector's base point) is kept for comparison runs and
/// penalizes distant features regardless of consistency.
enum class DistanceMetric { PointToLine, PointToPoint };

struct FoeEstimate {
    PixelPoint point;
    std::vector<bool> inlier_mask;      ///< aligned with the input vectors
    std::vector<double> loo_distances;  ///< pixels; +inf for untracked input
    double threshold = 0.0;             ///< realized percentile cutoff, pixels
};

/// Throws ZeroMagnitude. Normal convention: unit flow direction rotated
/// counterclockwise by 90 degrees, (dx, dy) -> (-dy, dx).
LineConstraint line_constraint(const FlowVector& fv);

/// Least-squares intersection of the constraint lines. Throws TooFewVectors
/// below 2 constraints and SingularSystem when all directions are
/// (anti)parallel, |det C| < 1e-12 * (trace C)^2.
PixelPoint solve_convergence(const std::vector<LineConstraint>& constraints);

/// Per-vector distance between the estimate solved without that vector and
/// the vector itself. Rank-one downdates of the stacked system keep the
/// whole sweep O(n). Untracked or zero-magnitude vectors get +inf. Throws
/// TooFewVectors below 3 usable vectors; SingularSystem propagates from
/// degenerate subsets.
std::vector<double> leave_one_out_distances(
    const std::vector<FlowVector>& vectors,
    DistanceMetric metric = DistanceMetric::PointToLine);

/// Leave-one-out distances, nearest-rank percentile cutoff, final solve
/// over the surviving inliers.
FoeEstimate estimate_foe(const std::vector<FlowVector>& vectors,
                         double percentile = 0.90,
                         DistanceMetric metric = DistanceMetric::PointToLine);

}  // namespace egoflow
