#include "egoflow/optical_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

// Minimum eigenvalue of the symmetric 2x2 matrix [[a, b], [b, c]].
double min_eigenvalue(double a, double b, double c) {
    const double half_trace = 0.5 * (a + c);
    const double half_diff = 0.5 * (a - c);
    return half_trace - std::sqrt(half_diff * half_diff + b * b);
}

}  // namespace

Pyramid build_pyramid(const GrayImage& img, int levels) {
    if (levels < 1) {
        throw TooManyLevels("pyramid needs at least one level");
    }
    Pyramid pyr;
    pyr.levels.reserve(static_cast<std::size_t>(levels));
    pyr.levels.push_back(img);
    for (int level = 1; level < levels; ++level) {
        const GrayImage& src = pyr.levels.back();
        const int w = src.width() / 2;
        const int h = src.height() / 2;
        if (w < kMinPyramidLevelSize || h < kMinPyramidLevelSize) {
            throw TooManyLevels("pyramid level " + std::to_string(level) +
                                " would be " + std::to_string(w) + "x" +
                                std::to_string(h));
        }
        GrayImage dst(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double sum = src.at(2 * x, 2 * y) + src.at(2 * x + 1, 2 * y) +
                                   src.at(2 * x, 2 * y + 1) +
                                   src.at(2 * x + 1, 2 * y + 1);
                dst.at(x, y) = static_cast<float>(0.25 * sum);
            }
        }
        pyr.levels.push_back(std::move(dst));
    }
    return pyr;
}

std::vector<PixelPoint> detect_features(const GrayImage& img, int max_count,
                                        double quality_ratio, double min_distance) {
    std::vector<PixelPoint> out;
    if (max_count <= 0 || img.width() < 5 || img.height() < 5) {
        return out;
    }
    const int w = img.width();
    const int h = img.height();

    // Central-difference gradients, border left at zero.
    std::vector<float> ix(static_cast<std::size_t>(w) * h, 0.0f);
    std::vector<float> iy(static_cast<std::size_t>(w) * h, 0.0f);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            ix[i] = 0.5f * (img.at(x + 1, y) - img.at(x - 1, y));
            iy[i] = 0.5f * (img.at(x, y + 1) - img.at(x, y - 1));
        }
    }

    // Min-eigenvalue score of the structure tensor aggregated over a 3x3
    // neighbourhood.
    std::vector<float> score(static_cast<std::size_t>(w) * h, 0.0f);
    double best = 0.0;
    for (int y = 2; y < h - 2; ++y) {
        for (int x = 2; x < w - 2; ++x) {
            double sxx = 0.0, sxy = 0.0, syy = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const std::size_t i =
                        static_cast<std::size_t>(y + dy) * w + (x + dx);
                    const double gx = ix[i];
                    const double gy = iy[i];
                    sxx += gx * gx;
                    sxy += gx * gy;
                    syy += gy * gy;
                }
            }
            const double lambda = min_eigenvalue(sxx, sxy, syy) / 9.0;
            if (lambda > 0.0) {
                score[static_cast<std::size_t>(y) * w + x] =
                    static_cast<float>(lambda);
                best = std::max(best, lambda);
            }
        }
    }
    if (best <= 0.0) {
        return out;
    }
    const double floor_score = quality_ratio * best;

    // Candidates: local maxima above the quality floor, strongest first.
    // Ties break on (y, x) so detection is fully deterministic.
    struct Candidate {
        float score;
        int x;
        int y;
    };
    std::vector<Candidate> candidates;
    for (int y = 2; y < h - 2; ++y) {
        for (int x = 2; x < w - 2; ++x) {
            const float s = score[static_cast<std::size_t>(y) * w + x];
            if (s < floor_score || s <= 0.0f) {
                continue;
            }
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    if (score[static_cast<std::size_t>(y + dy) * w + (x + dx)] > s) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) {
                candidates.push_back({s, x, y});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.score != b.score) return a.score > b.score;
                  if (a.y != b.y) return a.y < b.y;
                  return a.x < b.x;
              });

    // Greedy suppression on a coarse grid so the distance check stays local.
    const double min_dist2 = min_distance * min_distance;
    const int cell = std::max(1, static_cast<int>(std::floor(min_distance)));
    const int grid_w = w / cell + 1;
    const int grid_h = h / cell + 1;
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(grid_w) * grid_h);
    std::vector<PixelPoint> accepted;
    for (const Candidate& c : candidates) {
        const int gx = c.x / cell;
        const int gy = c.y / cell;
        bool clear = true;
        for (int ny = std::max(0, gy - 1); ny <= std::min(grid_h - 1, gy + 1) && clear;
             ++ny) {
            for (int nx = std::max(0, gx - 1); nx <= std::min(grid_w - 1, gx + 1);
                 ++nx) {
                for (int idx : grid[static_cast<std::size_t>(ny) * grid_w + nx]) {
                    const double du = accepted[static_cast<std::size_t>(idx)].u - c.x;
                    const double dv = accepted[static_cast<std::size_t>(idx)].v - c.y;
                    if (du * du + dv * dv < min_dist2) {
                        clear = false;
                        break;
                    }
                }
                if (!clear) break;
            }
        }
        if (!clear) {
            continue;
        }
        grid[static_cast<std::size_t>(gy) * grid_w + gx].push_back(
            static_cast<int>(accepted.size()));
        accepted.push_back({static_cast<double>(c.x), static_cast<double>(c.y)});
        if (static_cast<int>(accepted.size()) >= max_count) {
            break;
        }
    }
    return accepted;
}

namespace {

struct TrackResult {
    double du = 0.0;
    double dv = 0.0;
    bool ok = false;
};

// Single-feature pyramidal LK, displacement propagated coarse to fine.
TrackResult track_one(const Pyramid& prev, const Pyramid& next, PixelPoint base,
                      const LkParams& p) {
    const int r = p.window_radius;
    const int win = 2 * r + 1;
    const double area = static_cast<double>(win) * win;
    const int top = static_cast<int>(prev.levels.size()) - 1;

    double gu = 0.0, gv = 0.0;  // displacement guess carried across levels
    std::vector<double> patch(static_cast<std::size_t>(win) * win);
    std::vector<double> grad_x(patch.size());
    std::vector<double> grad_y(patch.size());

    for (int level = top; level >= 0; --level) {
        const GrayImage& a = prev.levels[static_cast<std::size_t>(level)];
        const GrayImage& b = next.levels[static_cast<std::size_t>(level)];
        const double scale = 1.0 / static_cast<double>(1 << level);
        const double px = base.u * scale;
        const double py = base.v * scale;

        // Gradients need one extra pixel around the window.
        if (!a.window_inside(px, py, r + 1)) {
            return {};
        }

        // Template patch and its spatial gradients from the earlier frame.
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (int wy = -r; wy <= r; ++wy) {
            for (int wx = -r; wx <= r; ++wx) {
                const std::size_t i =
                    static_cast<std::size_t>(wy + r) * win + (wx + r);
                const double sx = px + wx;
                const double sy = py + wy;
                patch[i] = a.bilinear(sx, sy);
                const double gx =
                    0.5 * (a.bilinear(sx + 1.0, sy) - a.bilinear(sx - 1.0, sy));
                const double gy =
                    0.5 * (a.bilinear(sx, sy + 1.0) - a.bilinear(sx, sy - 1.0));
                grad_x[i] = gx;
                grad_y[i] = gy;
                sxx += gx * gx;
                sxy += gx * gy;
                syy += gy * gy;
            }
        }
        if (min_eigenvalue(sxx, sxy, syy) / area < p.min_eig) {
            return {};
        }
        const double det = sxx * syy - sxy * sxy;
        if (det <= 0.0) {
            return {};
        }

        // Iterative refinement at this level.
        double nu_u = 0.0, nu_v = 0.0;
        for (int iter = 0; iter < p.max_iters; ++iter) {
            const double qx = px + gu + nu_u;
            const double qy = py + gv + nu_v;
            if (!b.window_inside(qx, qy, r)) {
                return {};
            }
            double bu = 0.0, bv = 0.0;
            for (int wy = -r; wy <= r; ++wy) {
                for (int wx = -r; wx <= r; ++wx) {
                    const std::size_t i =
                        static_cast<std::size_t>(wy + r) * win + (wx + r);
                    const double diff = patch[i] - b.bilinear(qx + wx, qy + wy);
                    bu += diff * grad_x[i];
                    bv += diff * grad_y[i];
                }
            }
            const double du = (syy * bu - sxy * bv) / det;
            const double dv = (sxx * bv - sxy * bu) / det;
            if (!std::isfinite(du) || !std::isfinite(dv)) {
                return {};
            }
            nu_u += du;
            nu_v += dv;
            if (std::sqrt(du * du + dv * dv) < p.eps) {
                break;
            }
        }
        gu += nu_u;
        gv += nu_v;
        if (level > 0) {
            gu *= 2.0;
            gv *= 2.0;
        }
    }
    if (!next.levels.front().window_inside(base.u + gu, base.v + gv, r)) {
        return {};
    }
    return {gu, gv, true};
}

}  // namespace

std::vector<FlowVector> lucas_kanade(const Pyramid& prev, const Pyramid& next,
                                     const std::vector<PixelPoint>& features,
                                     const LkParams& params) {
    if (prev.levels.empty() || next.levels.empty() ||
        prev.levels.size() != next.levels.size() ||
        prev.width() != next.width() || prev.height() != next.height()) {
        throw GeometryMismatch("pyramids differ in size or depth");
    }
    for (std::size_t i = 0; i < prev.levels.size(); ++i) {
        if (prev.levels[i].width() != next.levels[i].width() ||
            prev.levels[i].height() != next.levels[i].height()) {
            throw GeometryMismatch("pyramid level " + std::to_string(i) +
                                   " differs in size");
        }
    }

    std::vector<FlowVector> out;
    out.reserve(features.size());
    for (const PixelPoint& f : features) {
        const TrackResult r = track_one(prev, next, f, params);
        out.push_back(make_flow(f, r.du, r.dv, r.ok));
    }
    return out;
}

}  // namespace egoflow
