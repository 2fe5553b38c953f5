#pragma once

// Signal constellations, Voronoi neighbors and union-type upper bounds on the
// mean error probability for equally likely signals.
//
// Every bound has the shape
//   P_e <= (1/m) sum_k sum_{j in J(k)} term(d(s_k, s_j))
// where J(k) is either the Voronoi neighbors of s_k or all other signals and
// term is 1/2 erfc(d / (2 sqrt(2 sigma^2))) (union bounds) or
// exp(-d^2 / 8 sigma^2) (Bhattacharyya). The hyperbolic bounds use the same
// structure with d the hyperbolic distance.

#include "hypgauss/error.hpp"
#include "hypgauss/hypgeo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hypgauss {

enum class Space { Euclidean, HyperbolicHalf, HyperbolicBall };

inline const char* to_string(Space s) noexcept {
    switch (s) {
    case Space::Euclidean: return "euclidean";
    case Space::HyperbolicHalf: return "hyperbolic-half";
    case Space::HyperbolicBall: return "hyperbolic-ball";
    }
    return "?";
}

inline bool is_hyperbolic(Space s) noexcept { return s != Space::Euclidean; }

inline Model model_of(Space s) {
    detail::require(is_hyperbolic(s), "euclidean space has no hyperbolic model");
    return s == Space::HyperbolicHalf ? Model::HalfSpace : Model::Ball;
}

inline Space space_of(Model m) noexcept {
    return m == Model::HalfSpace ? Space::HyperbolicHalf : Space::HyperbolicBall;
}

using NeighborLists = std::vector<std::vector<std::size_t>>;

/// An ordered set of m >= 2 distinct signals in one space.
class Constellation {
public:
    using Point = std::vector<double>;

    Constellation(Space space, std::vector<Point> signals, std::optional<NeighborLists> neighbors = {},
                  bool geometrically_uniform = false)
        : space_(space), signals_(std::move(signals)), neighbors_(std::move(neighbors)),
          gu_(geometrically_uniform) {
        validate();
    }

    Space space() const noexcept { return space_; }
    bool hyperbolic() const noexcept { return is_hyperbolic(space_); }
    std::size_t dim() const noexcept { return signals_.front().size(); }
    std::size_t size() const noexcept { return signals_.size(); }
    std::span<const double> signal(std::size_t k) const { return signals_.at(k); }
    const std::vector<Point>& signals() const noexcept { return signals_; }
    ModelPoint point(std::size_t k) const { return ModelPoint::make(model_of(space_), signals_.at(k)); }

    const std::optional<NeighborLists>& neighbors() const noexcept { return neighbors_; }
    bool geometrically_uniform() const noexcept { return gu_; }

    Constellation with_neighbors(NeighborLists lists) const {
        return Constellation(space_, signals_, std::move(lists), gu_);
    }

    Constellation without_neighbors() const { return Constellation(space_, signals_, std::nullopt, gu_); }

    /// Distance in the native metric between two coordinate vectors.
    double metric(std::span<const double> x, std::span<const double> y) const noexcept {
        switch (space_) {
        case Space::Euclidean: return std::sqrt(detail::dist2(x, y));
        case Space::HyperbolicHalf: return detail::half_space_distance(x, y);
        case Space::HyperbolicBall: return detail::ball_distance(x, y);
        }
        return 0.0;
    }

    double distance(std::size_t i, std::size_t j) const { return metric(signal(i), signal(j)); }

    /// Applies an isometry to every signal; neighbors and the uniformity flag carry over.
    Constellation transformed(const std::function<ModelPoint(const ModelPoint&)>& iso) const {
        detail::require(hyperbolic(), "isometries act on hyperbolic constellations");
        std::vector<Point> out;
        out.reserve(size());
        std::optional<Model> model;
        for (std::size_t k = 0; k < size(); ++k) {
            const ModelPoint p = iso(point(k));
            detail::require(!model || *model == p.model(), "isometry changed model mid-way");
            model = p.model();
            out.emplace_back(p.coords().begin(), p.coords().end());
        }
        return Constellation(space_of(*model), std::move(out), neighbors_, gu_);
    }

    Constellation in_model(Model target) const {
        return transformed([target](const ModelPoint& p) { return to_model(p, target); });
    }

private:
    void validate() const {
        detail::require(signals_.size() >= 2, "a constellation needs at least two signals");
        const std::size_t n = signals_.front().size();
        detail::require(n >= 1, "signal dimension must be at least 1");
        for (const auto& s : signals_) {
            detail::require(s.size() == n, "all signals must share one dimension");
            for (double c : s) detail::require(std::isfinite(c), "signal coordinates must be finite");
            if (space_ == Space::HyperbolicHalf)
                detail::require(detail::valid_half_space(s), "half-space signal needs x_n > 0");
            if (space_ == Space::HyperbolicBall)
                detail::require(detail::valid_ball(s), "ball signal needs |x| < 1");
        }
        for (std::size_t i = 0; i < signals_.size(); ++i)
            for (std::size_t j = i + 1; j < signals_.size(); ++j)
                detail::require(signals_[i] != signals_[j], "signals must be distinct");
        if (!neighbors_) return;
        const auto& nb = *neighbors_;
        detail::require(nb.size() == signals_.size(), "one neighbor list per signal is required");
        for (std::size_t k = 0; k < nb.size(); ++k) {
            for (std::size_t j : nb[k]) {
                detail::require(j < nb.size(), "neighbor index out of range");
                detail::require(j != k, "a signal cannot be its own neighbor");
                detail::require(std::count(nb[k].begin(), nb[k].end(), j) == 1, "duplicate neighbor index");
                detail::require(std::find(nb[j].begin(), nb[j].end(), k) != nb[j].end(),
                                "neighbor lists must be symmetric");
            }
        }
    }

    Space space_;
    std::vector<Point> signals_;
    std::optional<NeighborLists> neighbors_;
    bool gu_;
};

/// M points equally spaced on a Euclidean circle of radius R, clockwise from (R, 0).
inline Constellation make_mpsk(std::size_t M, double radius) {
    detail::require(M >= 2, "M-PSK needs M >= 2");
    detail::require(std::isfinite(radius) && radius > 0.0, "radius must be positive");
    std::vector<Constellation::Point> pts;
    pts.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M);
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return Constellation(Space::Euclidean, std::move(pts), std::nullopt, true);
}

/// M points equally spaced on the hyperbolic circle of radius r about i in
/// the upper half-plane: the images of i e^{-r} under rotation about i by 2k pi/M.
inline Constellation make_mhpsk(std::size_t M, double hyper_radius) {
    detail::require(M >= 2, "M-HPSK needs M >= 2");
    detail::require(std::isfinite(hyper_radius) && hyper_radius > 0.0, "radius must be positive");
    const ModelPoint z = ModelPoint::half_space({0.0, std::exp(-hyper_radius)});
    std::vector<Constellation::Point> pts;
    pts.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
        const ModelPoint p = rotate_about_i(z, static_cast<long>(k), static_cast<long>(M));
        pts.emplace_back(p.coords().begin(), p.coords().end());
    }
    return Constellation(Space::HyperbolicHalf, std::move(pts), std::nullopt, true);
}

namespace detail {

// Half-plane {u : normal . u >= offset}, normal of unit length.
struct HalfPlane {
    std::array<double, 2> normal;
    double offset;
};

// Cell constraint "closer to s_k than to s_i" as a half-plane. Euclidean
// signals use their coordinates directly; hyperbolic signals use the Klein
// disk, where bisectors are chords: with hyperboloid lifts S = (S0, S'),
// d(x, s_k) <= d(x, s_i) iff <X, S_k - S_i>_Lorentz >= 0, i.e.
// (S'_k - S'_i) . u >= S0_k - S0_i for the Klein point u = X'/X0.
inline HalfPlane cell_constraint(const std::array<double, 3>& sk, const std::array<double, 3>& si) {
    const double nx = sk[1] - si[1];
    const double ny = sk[2] - si[2];
    const double len = std::hypot(nx, ny);
    return {{nx / len, ny / len}, (sk[0] - si[0]) / len};
}

} // namespace detail

/// Feasibility slack below which a bisector is treated as touching a cell
/// only at a vertex.
inline constexpr double neighbor_tolerance = 1e-9;

/// Exact Voronoi neighbors of a planar constellation.
///
/// j is listed for k iff the (k, j) bisector carries an edge of positive
/// length of the Voronoi cell of s_k. Cells are intersections of half-planes
/// (in the Klein disk for hyperbolic signals), so each test clips the
/// bisector line against the other constraints and the disk.
inline NeighborLists voronoi_neighbors(const Constellation& c) {
    if (c.dim() != 2)
        detail::fail(ErrorKind::UnsupportedExactNeighbors,
                     "exact neighbors need dimension 2; supply neighbor lists or use the all-pairs bound");
    const std::size_t m = c.size();
    // (offset scale, x, y): for Euclidean points the constraint offset is (|a|^2 - |b|^2)/2
    std::vector<std::array<double, 3>> lift(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (c.hyperbolic()) {
            const ModelPoint b = to_model(c.point(k), Model::Ball);
            const double r2 = detail::norm2(b.coords());
            const double inv = 1.0 / (1.0 - r2);
            lift[k] = {(1.0 + r2) * inv, 2.0 * b[0] * inv, 2.0 * b[1] * inv};
        } else {
            const auto s = c.signal(k);
            lift[k] = {0.5 * (s[0] * s[0] + s[1] * s[1]), s[0], s[1]};
        }
    }

    NeighborLists out(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j == k) continue;
            const detail::HalfPlane bis = detail::cell_constraint(lift[k], lift[j]);
            const std::array<double, 2> p0{bis.normal[0] * bis.offset, bis.normal[1] * bis.offset};
            const std::array<double, 2> dir{-bis.normal[1], bis.normal[0]};
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            if (c.hyperbolic()) {
                const double h2 = 1.0 - (p0[0] * p0[0] + p0[1] * p0[1]);
                if (h2 <= 0.0) continue;
                hi = std::sqrt(h2);
                lo = -hi;
            }
            bool feasible = true;
            for (std::size_t i = 0; i < m && feasible; ++i) {
                if (i == k || i == j) continue;
                const detail::HalfPlane h = detail::cell_constraint(lift[k], lift[i]);
                const double alpha = h.normal[0] * dir[0] + h.normal[1] * dir[1];
                const double beta = h.offset - (h.normal[0] * p0[0] + h.normal[1] * p0[1]);
                if (std::abs(alpha) < 1e-15) {
                    feasible = beta <= neighbor_tolerance;
                } else if (alpha > 0.0) {
                    lo = std::max(lo, beta / alpha);
                } else {
                    hi = std::min(hi, beta / alpha);
                }
            }
            if (feasible && hi - lo > neighbor_tolerance) out[k].push_back(j);
        }
    }
    // clipping is exact up to rounding; keep the lists symmetric regardless
    for (std::size_t k = 0; k < m; ++k) {
        auto& row = out[k];
        row.erase(std::remove_if(row.begin(), row.end(),
                                 [&](std::size_t j) {
                                     return std::find(out[j].begin(), out[j].end(), k) == out[j].end();
                                 }),
                  row.end());
    }
    return out;
}

/// Returns `c` with neighbor lists attached, computing them when absent.
inline Constellation ensure_neighbors(const Constellation& c) {
    if (c.neighbors()) return c;
    return c.with_neighbors(voronoi_neighbors(c));
}

enum class BoundKind { UnionNeighbors, UnionAllPairs, Bhattacharyya, GeometricallyUniform };
enum class PairMode { Neighbors, AllPairs };

inline const char* to_string(BoundKind k) noexcept {
    switch (k) {
    case BoundKind::UnionNeighbors: return "neighbors";
    case BoundKind::UnionAllPairs: return "allpairs";
    case BoundKind::Bhattacharyya: return "bhattacharyya";
    case BoundKind::GeometricallyUniform: return "gu";
    }
    return "?";
}

struct PairTerm {
    std::size_t k;
    std::size_t j;
    double distance;
    double value;
};

struct BoundReport {
    BoundKind kind;
    std::vector<double> per_signal;
    double mean_bound = 0.0;
    std::vector<PairTerm> terms;
    double sigma2 = 0.0;
};

/// 1/2 erfc(d / (2 sqrt(2 sigma^2))): the pairwise error bound at distance d.
inline double pairwise_erfc_term(double d, double sigma2) {
    return 0.5 * std::erfc(d / (2.0 * std::sqrt(2.0 * sigma2)));
}

/// exp(-d^2 / 8 sigma^2).
inline double bhattacharyya_term(double d, double sigma2) { return std::exp(-d * d / (8.0 * sigma2)); }

namespace detail {

inline void require_variance(double sigma2) {
    require(std::isfinite(sigma2) && sigma2 > 0.0, "noise variance must be positive");
}

template <class Term>
BoundReport pair_sum(const Constellation& c, double sigma2, BoundKind kind, PairMode mode,
                     std::size_t rows, Term term) {
    require_variance(sigma2);
    if (mode == PairMode::Neighbors && !c.neighbors())
        fail(ErrorKind::MissingNeighbors, "neighbors mode needs neighbor lists");
    BoundReport rep{kind, std::vector<double>(rows, 0.0), 0.0, {}, sigma2};
    for (std::size_t k = 0; k < rows; ++k) {
        auto add = [&](std::size_t j) {
            const double d = c.distance(k, j);
            const double v = term(d);
            rep.per_signal[k] += v;
            rep.terms.push_back({k, j, d, v});
        };
        if (mode == PairMode::Neighbors) {
            for (std::size_t j : (*c.neighbors())[k]) add(j);
        } else {
            for (std::size_t j = 0; j < c.size(); ++j)
                if (j != k) add(j);
        }
    }
    double sum = 0.0;
    for (double v : rep.per_signal) sum += v;
    rep.mean_bound = sum / static_cast<double>(rows);
    return rep;
}

inline BoundKind union_kind(PairMode mode) {
    return mode == PairMode::Neighbors ? BoundKind::UnionNeighbors : BoundKind::UnionAllPairs;
}

} // namespace detail

/// Union bound for AWGN on a Euclidean constellation.
inline BoundReport union_bound_euclidean(const Constellation& c, double sigma2, PairMode mode) {
    detail::require(!c.hyperbolic(), "union_bound_euclidean needs a euclidean constellation");
    return detail::pair_sum(c, sigma2, detail::union_kind(mode), mode, c.size(),
                            [&](double d) { return pairwise_erfc_term(d, sigma2); });
}

/// Union bound for hyperbolic Gaussian noise on a hyperbolic constellation.
inline BoundReport union_bound_hyperbolic(const Constellation& c, double sigma2, PairMode mode) {
    detail::require(c.hyperbolic(), "union_bound_hyperbolic needs a hyperbolic constellation");
    return detail::pair_sum(c, sigma2, detail::union_kind(mode), mode, c.size(),
                            [&](double d) { return pairwise_erfc_term(d, sigma2); });
}

/// Dispatches on the constellation space.
inline BoundReport union_bound(const Constellation& c, double sigma2, PairMode mode) {
    return c.hyperbolic() ? union_bound_hyperbolic(c, sigma2, mode) : union_bound_euclidean(c, sigma2, mode);
}

/// Bhattacharyya bound; Euclidean only.
inline BoundReport bhattacharyya_bound(const Constellation& c, double sigma2) {
    if (c.hyperbolic())
        detail::fail(ErrorKind::UnsupportedMode, "no Bhattacharyya form is available for hyperbolic constellations");
    return detail::pair_sum(c, sigma2, BoundKind::Bhattacharyya, PairMode::AllPairs, c.size(),
                            [&](double d) { return bhattacharyya_term(d, sigma2); });
}

/// Geometrically uniform form: the signal-1 row of the neighbors union bound,
/// which bounds every signal's error probability and hence P_e.
inline BoundReport gu_bound(const Constellation& c, double sigma2) {
    if (!c.geometrically_uniform())
        detail::fail(ErrorKind::InvalidUse, "constellation is not flagged geometrically uniform");
    BoundReport rep = detail::pair_sum(c, sigma2, BoundKind::GeometricallyUniform, PairMode::Neighbors, 1,
                                       [&](double d) { return pairwise_erfc_term(d, sigma2); });
    return rep;
}

} // namespace hypgauss
