#pragma once

#include <vector>

#include "egoflow/camera.hpp"
#include "egoflow/foe.hpp"
#include "egoflow/synthetic.hpp"

namespace egoflow {

/// Planar flow-magnitude model y = beta0 + beta1*x1 + beta2*x2, trained on
/// the synthetic field at a known reference speed.
struct RegressionModel {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double residual_sigma = 0.0;   ///< RMS training residual, pixels
    double reference_speed = 0.0;  ///< km/h the training field was rendered at
};

enum class VectorLabel { Outlier, StaticInlier, Moving };

struct LabeledVector {
    FlowVector vector;
    VectorLabel label = VectorLabel::Outlier;
    double residual = 0.0;  ///< observed minus scaled prediction, pixels
};

struct SpeedEstimate {
    double ratio = 0.0;  ///< observed / predicted magnitude scale
    double speed = 0.0;  ///< km/h
    int sample_count = 0;
};

/// Ordinary least squares on the 3x3 normal equations (predictors centered
/// for conditioning). Throws RankDeficient on collinear sample positions.
RegressionModel fit(const std::vector<SyntheticSample>& samples,
                    double reference_speed);

double predict(const RegressionModel& m, double x1, double x2);

/// At most one vector per grid cell, the one closest to the cell center
/// (first index wins ties). Output in row-major cell order.
std::vector<FlowVector> uniform_sample(const std::vector<FlowVector>& vectors,
                                       int grid_nx, int grid_ny, int width,
                                       int height);

/// Median observed/predicted ratio over vectors whose prediction exceeds
/// 0.5 px. Throws TooFewSamples below 5 such vectors.
SpeedEstimate estimate_speed(const std::vector<FlowVector>& observed,
                             const RegressionModel& m);

/// FOE-rejected vectors stay Outlier regardless of residual; the rest split
/// on |magnitude - ratio*prediction| > k_sigma * ratio * residual_sigma.
std::vector<LabeledVector> classify(const std::vector<FlowVector>& vectors,
                                    const FoeEstimate& foe_result,
                                    const RegressionModel& m, double speed_ratio,
                                    double k_sigma);

}  // namespace egoflow
