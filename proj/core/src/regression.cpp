#include "egoflow/regression.hpp"

#include <algorithm>
#include <cmath>

#include "egoflow/errors.hpp"

namespace egoflow {

RegressionModel fit(const std::vector<SyntheticSample>& samples,
                    double reference_speed) {
    const std::size_t n = samples.size();
    if (n < 3) {
        throw RankDeficient("regression needs at least 3 samples, got " +
                            std::to_string(n));
    }
    double m1 = 0.0, m2 = 0.0, my = 0.0;
    for (const SyntheticSample& s : samples) {
        m1 += s.x1;
        m2 += s.x2;
        my += s.magnitude;
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (const SyntheticSample& s : samples) {
        const double d1 = s.x1 - m1;
        const double d2 = s.x2 - m2;
        const double dy = s.magnitude - my;
        a11 += d1 * d1;
        a12 += d1 * d2;
        a22 += d2 * d2;
        b1 += d1 * dy;
        b2 += d2 * dy;
    }
    const double det = a11 * a22 - a12 * a12;
    const double trace = a11 + a22;
    if (!(det > 1e-12 * trace * trace)) {
        throw RankDeficient("sample positions are collinear");
    }

    RegressionModel m;
    m.beta1 = (a22 * b1 - a12 * b2) / det;
    m.beta2 = (a11 * b2 - a12 * b1) / det;
    m.beta0 = my - m.beta1 * m1 - m.beta2 * m2;
    m.reference_speed = reference_speed;

    double ss = 0.0;
    for (const SyntheticSample& s : samples) {
        const double r = s.magnitude - predict(m, s.x1, s.x2);
        ss += r * r;
    }
    m.residual_sigma = std::sqrt(ss / static_cast<double>(n));
    return m;
}

double predict(const RegressionModel& m, double x1, double x2) {
    return m.beta0 + m.beta1 * x1 + m.beta2 * x2;
}

std::vector<FlowVector> uniform_sample(const std::vector<FlowVector>& vectors,
                                       int grid_nx, int grid_ny, int width,
                                       int height) {
    if (grid_nx < 1 || grid_ny < 1) {
        throw ConfigError("sampling grid must be at least 1x1");
    }
    const double cell_w = static_cast<double>(width) / grid_nx;
    const double cell_h = static_cast<double>(height) / grid_ny;
    const int cells = grid_nx * grid_ny;
    std::vector<int> best(static_cast<std::size_t>(cells), -1);
    std::vector<double> best_d2(static_cast<std::size_t>(cells), 0.0);

    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const PixelPoint& p = vectors[i].base;
        const int cx = std::clamp(static_cast<int>(p.u / cell_w), 0, grid_nx - 1);
        const int cy = std::clamp(static_cast<int>(p.v / cell_h), 0, grid_ny - 1);
        const double du = p.u - (cx + 0.5) * cell_w;
        const double dv = p.v - (cy + 0.5) * cell_h;
        const double d2 = du * du + dv * dv;
        const int cell = cy * grid_nx + cx;
        if (best[static_cast<std::size_t>(cell)] < 0 ||
            d2 < best_d2[static_cast<std::size_t>(cell)]) {
            best[static_cast<std::size_t>(cell)] = static_cast<int>(i);
            best_d2[static_cast<std::size_t>(cell)] = d2;
        }
    }

    std::vector<FlowVector> out;
    for (int cell = 0; cell < cells; ++cell) {
        if (best[static_cast<std::size_t>(cell)] >= 0) {
            out.push_back(
                vectors[static_cast<std::size_t>(best[static_cast<std::size_t>(cell)])]);
        }
    }
    return out;
}

SpeedEstimate estimate_speed(const std::vector<FlowVector>& observed,
                             const RegressionModel& m) {
    std::vector<double> ratios;
    ratios.reserve(observed.size());
    for (const FlowVector& fv : observed) {
        const double pred = predict(m, fv.base.u, fv.base.v);
        if (pred > 0.5) {
            ratios.push_back(fv.magnitude / pred);
        }
    }
    if (ratios.size() < 5) {
        throw TooFewSamples("speed estimate needs 5 usable vectors, got " +
                            std::to_string(ratios.size()));
    }
    std::sort(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    const double median = (n % 2 == 1)
                              ? ratios[n / 2]
                              : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);

    SpeedEstimate est;
    est.ratio = median;
    est.speed = median * m.reference_speed;
    est.sample_count = static_cast<int>(n);
    return est;
}

std::vector<LabeledVector> classify(const std::vector<FlowVector>& vectors,
                                    const FoeEstimate& foe_result,
                                    const RegressionModel& m, double speed_ratio,
                                    double k_sigma) {
    if (vectors.size() != foe_result.inlier_mask.size()) {
        throw LengthMismatch("classify: " + std::to_string(vectors.size()) +
                             " vectors vs " +
                             std::to_string(foe_result.inlier_mask.size()) +
                             " mask entries");
    }
    const double gate = k_sigma * speed_ratio * m.residual_sigma;
    std::vector<LabeledVector> out;
    out.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        LabeledVector lv;
        lv.vector = vectors[i];
        lv.residual = vectors[i].magnitude -
                      speed_ratio * predict(m, vectors[i].base.u, vectors[i].base.v);
        if (!foe_result.inlier_mask[i]) {
            lv.label = VectorLabel::Outlier;
        } else if (std::abs(lv.residual) > gate) {
            lv.label = VectorLabel::Moving;
        } else {
            lv.label = VectorLabel::StaticInlier;
        }
        out.push_back(lv);
    }
    return out;
}

}  // namespace egoflow
