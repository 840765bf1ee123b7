#include "egoflow/foe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

constexpr double kSingularRatio = 1e-12;

struct Stacked {
    double cxx = 0.0, cxy = 0.0, cyy = 0.0;  // C = sum alpha alpha^T
    double gu = 0.0, gv = 0.0;               // gamma = sum alpha beta

    void add(const LineConstraint& c) {
        cxx += c.alpha_u * c.alpha_u;
        cxy += c.alpha_u * c.alpha_v;
        cyy += c.alpha_v * c.alpha_v;
        gu += c.alpha_u * c.beta;
        gv += c.alpha_v * c.beta;
    }
    void remove(const LineConstraint& c) {
        cxx -= c.alpha_u * c.alpha_u;
        cxy -= c.alpha_u * c.alpha_v;
        cyy -= c.alpha_v * c.alpha_v;
        gu -= c.alpha_u * c.beta;
        gv -= c.alpha_v * c.beta;
    }
    PixelPoint solve() const {
        const double det = cxx * cyy - cxy * cxy;
        const double trace = cxx + cyy;
        if (std::abs(det) < kSingularRatio * trace * trace) {
            throw SingularSystem("flow directions are (anti)parallel");
        }
        return {(cyy * gu - cxy * gv) / det, (cxx * gv - cxy * gu) / det};
    }
};

bool usable(const FlowVector& fv) { return fv.track_ok && fv.magnitude > 0.0; }

double distance_to(const FlowVector& fv, const LineConstraint& c,
                   const PixelPoint& estimate, DistanceMetric metric) {
    if (metric == DistanceMetric::PointToPoint) {
        return std::hypot(estimate.u - fv.base.u, estimate.v - fv.base.v);
    }
    return std::abs(c.alpha_u * estimate.u + c.alpha_v * estimate.v - c.beta);
}

}  // namespace

LineConstraint line_constraint(const FlowVector& fv) {
    if (!(fv.magnitude > 0.0)) {
        throw ZeroMagnitude("flow vector has zero magnitude");
    }
    const double du = fv.du / fv.magnitude;
    const double dv = fv.dv / fv.magnitude;
    LineConstraint c;
    c.alpha_u = -dv;
    c.alpha_v = du;
    c.beta = c.alpha_u * fv.base.u + c.alpha_v * fv.base.v;
    return c;
}

PixelPoint solve_convergence(const std::vector<LineConstraint>& constraints) {
    if (constraints.size() < 2) {
        throw TooFewVectors("convergence needs at least 2 constraints, got " +
                            std::to_string(constraints.size()));
    }
    Stacked s;
    for (const LineConstraint& c : constraints) {
        s.add(c);
    }
    return s.solve();
}

std::vector<double> leave_one_out_distances(const std::vector<FlowVector>& vectors,
                                            DistanceMetric metric) {
    std::vector<std::size_t> valid;
    valid.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (usable(vectors[i])) {
            valid.push_back(i);
        }
    }
    if (valid.size() < 3) {
        throw TooFewVectors("leave-one-out needs at least 3 usable vectors, got " +
                            std::to_string(valid.size()));
    }

    std::vector<LineConstraint> constraints;
    constraints.reserve(valid.size());
    Stacked full;
    for (std::size_t i : valid) {
        constraints.push_back(line_constraint(vectors[i]));
        full.add(constraints.back());
    }

    std::vector<double> distances(vectors.size(),
                                  std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < valid.size(); ++k) {
        Stacked reduced = full;
        reduced.remove(constraints[k]);
        const PixelPoint estimate = reduced.solve();
        distances[valid[k]] =
            distance_to(vectors[valid[k]], constraints[k], estimate, metric);
    }
    return distances;
}

FoeEstimate estimate_foe(const std::vector<FlowVector>& vectors, double percentile,
                         DistanceMetric metric) {
    FoeEstimate est;
    est.loo_distances = leave_one_out_distances(vectors, metric);

    std::vector<double> finite;
    finite.reserve(est.loo_distances.size());
    for (double d : est.loo_distances) {
        if (std::isfinite(d)) {
            finite.push_back(d);
        }
    }
    std::sort(finite.begin(), finite.end());
    const auto n = static_cast<double>(finite.size());
    const auto rank = static_cast<std::size_t>(std::clamp(
        std::ceil(percentile * n), 1.0, n));
    est.threshold = finite[rank - 1];

    est.inlier_mask.assign(vectors.size(), false);
    std::vector<LineConstraint> inliers;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (usable(vectors[i]) && est.loo_distances[i] <= est.threshold) {
            est.inlier_mask[i] = true;
            inliers.push_back(line_constraint(vectors[i]));
        }
    }
    est.point = solve_convergence(inliers);
    return est;
}

}  // namespace egoflow
