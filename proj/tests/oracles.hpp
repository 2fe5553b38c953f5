#pragma once

// Brute-force references shared by the unit and acceptance tests.

#include "hypgauss/codes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using namespace hypgauss;

// j neighbors k iff some sampled bisector point is strictly closer (by
// `margin`) to s_k and s_j than to every other signal. Hyperbolic bisectors
// are sampled by moving the geodesic midpoint to the ball center, where the
// bisector is the diameter orthogonal to the image of s_k; the parameter is
// arc length. Euclidean bisectors use offset sinh(u) to reach the far ends of
// unbounded cells. After the uniform pass on [-span, span], the best few
// samples are resampled on finer grids so short edges are not stepped over.
inline NeighborLists dense_sampling_neighbors(const Constellation& c, int samples = 10000, double span = 16.0,
                                              double margin = 1e-9) {
    const std::size_t m = c.size();
    NeighborLists out(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j == k) continue;
            std::function<std::vector<double>(double)> at;
            if (c.hyperbolic()) {
                const ModelPoint mid = to_model(geodesic_midpoint(c.point(k), c.point(j)), Model::Ball);
                const ModelPoint wk = ball_untranslate(mid, to_model(c.point(k), Model::Ball));
                const double len = std::hypot(wk[0], wk[1]);
                const double px = -wk[1] / len, py = wk[0] / len;
                at = [&c, mid, px, py](double u) {
                    const double rho = std::tanh(0.5 * u);
                    const ModelPoint q = ball_translate(mid, ModelPoint::ball({rho * px, rho * py}));
                    const ModelPoint native = to_model(q, model_of(c.space()));
                    return std::vector<double>(native.coords().begin(), native.coords().end());
                };
            } else {
                const auto a = c.signal(k), b = c.signal(j);
                const double mx = 0.5 * (a[0] + b[0]), my = 0.5 * (a[1] + b[1]);
                const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
                const double ux = -(b[1] - a[1]) / len, uy = (b[0] - a[0]) / len;
                at = [=](double u) {
                    const double t = std::sinh(u);
                    return std::vector<double>{mx + t * ux, my + t * uy};
                };
            }
            // how much closer the probe is to s_k than to the nearest third signal
            auto slack = [&](double u) -> double {
                std::vector<double> p;
                try {
                    p = at(u);
                } catch (const Error&) {
                    return -INFINITY; // left the representable model
                }
                const double dk = c.metric(p, c.signal(k));
                double best = INFINITY;
                for (std::size_t i = 0; i < m; ++i)
                    if (i != k && i != j) best = std::min(best, c.metric(p, c.signal(i)) - dk);
                return best;
            };
            std::vector<std::pair<double, double>> windows{{-span, span}};
            bool found = false;
            for (int level = 0; level < 4 && !found; ++level) {
                std::vector<std::pair<double, double>> scored; // (slack, u)
                const int n = level == 0 ? samples : 1000;
                double step = 0.0;
                for (const auto& [wlo, whi] : windows) {
                    step = (whi - wlo) / (n - 1);
                    for (int s = 0; s < n; ++s) {
                        const double u = wlo + step * s;
                        const double v = slack(u);
                        if (v > margin) {
                            found = true;
                            break;
                        }
                        scored.push_back({v, u});
                    }
                    if (found) break;
                }
                if (found) break;
                const std::size_t keep = std::min<std::size_t>(3, scored.size());
                std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                                  [](const auto& x, const auto& y) { return x.first > y.first; });
                windows.clear();
                for (std::size_t t = 0; t < keep; ++t) windows.push_back({scored[t].second - step, scored[t].second + step});
            }
            if (found) out[k].push_back(j);
        }
    }
    return out;
}

// m points in the half-plane whose ball images lie within hyperbolic radius 2 of the center.
inline Constellation random_planar(std::mt19937_64& g, std::size_t m) {
    std::uniform_real_distribution<double> radius(0.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Constellation::Point> pts;
    while (pts.size() < m) {
        const double rho = std::tanh(0.5 * radius(g));
        const double a = angle(g);
        const ModelPoint h = to_half_space(ModelPoint::ball({rho * std::cos(a), rho * std::sin(a)}));
        pts.push_back({h[0], h[1]});
    }
    return Constellation(Space::HyperbolicHalf, std::move(pts));
}

} // namespace oracle
