#pragma once

// Poincare half-space and ball models of hyperbolic n-space.
//
// Points carry their model; every distance and isometry here is a pure
// function of its arguments. The "conjugate" used by the model transfer maps
// is reflection in the boundary hyperplane, i.e. negation of the last
// coordinate.

#include "hypgauss/error.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hypgauss {

enum class Model { HalfSpace, Ball };

inline const char* to_string(Model m) noexcept {
    return m == Model::HalfSpace ? "half-space" : "ball";
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) noexcept { return dot(a, a); }

inline double dist2(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// |a - reflect(b)|^2 where reflect negates the last coordinate.
inline double dist2_reflected(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    const double d = a[n - 1] + b[n - 1];
    return s + d * d;
}

inline bool valid_half_space(std::span<const double> x) noexcept {
    if (x.empty()) return false;
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return x.back() > 0.0;
}

inline bool valid_ball(std::span<const double> x) noexcept {
    if (x.empty()) return false;
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return norm2(x) < 1.0;
}

/// Mobius addition a (+) x on the open unit ball; an isometry taking 0 to a.
inline std::vector<double> mobius_add(std::span<const double> a, std::span<const double> x) {
    const double ax = dot(a, x);
    const double aa = norm2(a);
    const double xx = norm2(x);
    const double ca = 1.0 + 2.0 * ax + xx;
    const double cx = 1.0 - aa;
    const double den = 1.0 + 2.0 * ax + aa * xx;
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (ca * a[i] + cx * x[i]) / den;
    return out;
}

} // namespace detail

/// A point of hyperbolic n-space in one of the two Poincare models.
///
/// Validated on construction: half-space points need a positive last
/// coordinate, ball points a Euclidean norm below one.
class ModelPoint {
public:
    static ModelPoint half_space(std::vector<double> coords) {
        detail::require(detail::valid_half_space(coords),
                        "half-space point needs finite coordinates and x_n > 0");
        return ModelPoint(Model::HalfSpace, std::move(coords));
    }

    static ModelPoint ball(std::vector<double> coords) {
        detail::require(detail::valid_ball(coords),
                        "ball point needs finite coordinates and |x| < 1");
        return ModelPoint(Model::Ball, std::move(coords));
    }

    static ModelPoint make(Model model, std::vector<double> coords) {
        return model == Model::HalfSpace ? half_space(std::move(coords)) : ball(std::move(coords));
    }

    /// Origin of the canonical frame: (0,...,0,1) in the half-space, 0 in the ball.
    static ModelPoint center(Model model, std::size_t n) {
        detail::require(n >= 1, "dimension must be at least 1");
        std::vector<double> c(n, 0.0);
        if (model == Model::HalfSpace) c.back() = 1.0;
        return ModelPoint(model, std::move(c));
    }

    Model model() const noexcept { return model_; }
    std::size_t dim() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }

    friend bool operator==(const ModelPoint&, const ModelPoint&) = default;

private:
    ModelPoint(Model model, std::vector<double> coords) : model_(model), coords_(std::move(coords)) {}

    Model model_;
    std::vector<double> coords_;
};

namespace detail {

inline void require_compatible(const ModelPoint& x, const ModelPoint& y, Model model) {
    require(x.model() == model && y.model() == model,
            std::string("expected two ") + to_string(model) + " points");
    require(x.dim() == y.dim(), "dimension mismatch");
}

inline void require_same(const ModelPoint& x, const ModelPoint& y) {
    require(x.model() == y.model(), "model mismatch");
    require(x.dim() == y.dim(), "dimension mismatch");
}

// |x-y*|^2 - |x-y|^2 = 4 x_n y_n turns ln((a+b)/(a-b)) into log1p(b(a+b)/(2 x_n y_n))
inline double half_space_distance(std::span<const double> xs, std::span<const double> ys) noexcept {
    const double b = std::sqrt(dist2(xs, ys));
    if (b == 0.0) return 0.0;
    const double a = std::sqrt(dist2_reflected(xs, ys));
    return std::log1p(b * (a + b) / (2.0 * xs.back() * ys.back()));
}

// same trick with A^2 - B^2 = (1-|x|^2)(1-|y|^2)
inline double ball_distance(std::span<const double> xs, std::span<const double> ys) noexcept {
    const double b2 = dist2(xs, ys);
    if (b2 == 0.0) return 0.0;
    const double p = (1.0 - norm2(xs)) * (1.0 - norm2(ys));
    const double b = std::sqrt(b2);
    const double a = std::sqrt(p + b2);
    return std::log1p(2.0 * b * (a + b) / p);
}

} // namespace detail

/// Hyperbolic distance in the upper half-space model,
///   ln((|x-y*|+|x-y|)/(|x-y*|-|x-y|)),  y* = y reflected in the boundary.
///
/// Evaluated without the cancellation in the denominator, so far-apart and
/// near-boundary pairs keep full relative accuracy.
inline double dist_half_space(const ModelPoint& x, const ModelPoint& y) {
    detail::require_compatible(x, y, Model::HalfSpace);
    return detail::half_space_distance(x.coords(), y.coords());
}

/// Hyperbolic distance in the unit ball model (general-n formula).
inline double dist_ball(const ModelPoint& x, const ModelPoint& y) {
    detail::require_compatible(x, y, Model::Ball);
    return detail::ball_distance(x.coords(), y.coords());
}

inline double distance(const ModelPoint& x, const ModelPoint& y) {
    detail::require_same(x, y);
    return x.model() == Model::HalfSpace ? dist_half_space(x, y) : dist_ball(x, y);
}

/// Half-space to ball: x -> 2 conj(x+p)/|x+p|^2 + p with p = (0,...,0,1).
inline ModelPoint to_ball(const ModelPoint& x) {
    detail::require(x.model() == Model::HalfSpace, "to_ball expects a half-space point");
    const std::size_t n = x.dim();
    std::vector<double> v(x.coords().begin(), x.coords().end());
    v[n - 1] += 1.0;
    const double s = 2.0 / detail::norm2(v);
    v[n - 1] = -v[n - 1];
    for (double& c : v) c *= s;
    v[n - 1] += 1.0;
    if (!detail::valid_ball(v))
        detail::fail(ErrorKind::BoundaryDegeneracy, "image lies on the ball boundary");
    return ModelPoint::ball(std::move(v));
}

/// Ball to half-space: x -> 2 conj(x-p)/|x-p|^2 - p.
inline ModelPoint to_half_space(const ModelPoint& x) {
    detail::require(x.model() == Model::Ball, "to_half_space expects a ball point");
    const std::size_t n = x.dim();
    std::vector<double> v(x.coords().begin(), x.coords().end());
    v[n - 1] -= 1.0;
    const double s = 2.0 / detail::norm2(v);
    v[n - 1] = -v[n - 1];
    for (double& c : v) c *= s;
    v[n - 1] -= 1.0;
    if (!detail::valid_half_space(v))
        detail::fail(ErrorKind::BoundaryDegeneracy, "image lies on the half-space boundary");
    return ModelPoint::half_space(std::move(v));
}

inline ModelPoint to_model(const ModelPoint& x, Model target) {
    if (x.model() == target) return x;
    return target == Model::Ball ? to_ball(x) : to_half_space(x);
}

/// Ball isometry taking the center to `a` (Mobius addition a (+) x).
inline ModelPoint ball_translate(const ModelPoint& a, const ModelPoint& x) {
    detail::require_compatible(a, x, Model::Ball);
    auto v = detail::mobius_add(a.coords(), x.coords());
    if (!detail::valid_ball(v))
        detail::fail(ErrorKind::BoundaryDegeneracy, "translated point lies on the ball boundary");
    return ModelPoint::ball(std::move(v));
}

/// Inverse of ball_translate(a, .): takes `a` to the center.
inline ModelPoint ball_untranslate(const ModelPoint& a, const ModelPoint& x) {
    detail::require_compatible(a, x, Model::Ball);
    std::vector<double> neg(a.coords().begin(), a.coords().end());
    for (double& c : neg) c = -c;
    auto v = detail::mobius_add(neg, x.coords());
    if (!detail::valid_ball(v))
        detail::fail(ErrorKind::BoundaryDegeneracy, "translated point lies on the ball boundary");
    return ModelPoint::ball(std::move(v));
}

/// Hyperbolic rotation of the upper half-plane about i by angle 2k*pi/M:
///   z -> (z cos(k pi/M) + sin(k pi/M)) / (-z sin(k pi/M) + cos(k pi/M)).
inline ModelPoint rotate_about_i(const ModelPoint& z, long k, long M) {
    detail::require(z.model() == Model::HalfSpace && z.dim() == 2,
                    "rotate_about_i expects a 2-dimensional half-space point");
    detail::require(M >= 1, "rotation denominator must be positive");
    const double theta = static_cast<double>(k) * std::numbers::pi / static_cast<double>(M);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::complex<double> w(z[0], z[1]);
    const std::complex<double> r = (w * c + s) / (-w * s + c);
    return ModelPoint::half_space({r.real(), r.imag()});
}

/// Midpoint of the geodesic segment xy, found by moving x to the ball center.
inline ModelPoint geodesic_midpoint(const ModelPoint& x, const ModelPoint& y) {
    detail::require_same(x, y);
    if (x == y) return x;
    const ModelPoint bx = to_model(x, Model::Ball);
    const ModelPoint by = to_model(y, Model::Ball);
    const ModelPoint w = ball_untranslate(bx, by);
    const double rho = std::sqrt(detail::norm2(w.coords()));
    if (rho == 0.0) return x;
    // center-to-point distance is 2 artanh(rho); halve it
    const double half = std::tanh(0.5 * std::atanh(rho)) / rho;
    std::vector<double> m(w.coords().begin(), w.coords().end());
    for (double& c : m) c *= half;
    return to_model(ball_translate(bx, ModelPoint::ball(std::move(m))), x.model());
}

/// The point at hyperbolic distance r from `origin` along `direction`.
///
/// `direction` is a unit vector in the frame obtained by translating origin
/// to the ball center; at the ball center itself the result is
/// tanh(r/2) * direction.
inline ModelPoint point_at_distance(const ModelPoint& origin, std::span<const double> direction,
                                    double r) {
    detail::require(std::isfinite(r) && r >= 0.0, "distance must be finite and nonnegative");
    detail::require(direction.size() == origin.dim(), "direction dimension mismatch");
    detail::require(std::abs(std::sqrt(detail::norm2(direction)) - 1.0) <= 1e-12,
                    "direction must be a unit vector");
    const double rho = std::tanh(0.5 * r);
    std::vector<double> w(direction.begin(), direction.end());
    for (double& c : w) c *= rho;
    if (!detail::valid_ball(w))
        detail::fail(ErrorKind::BoundaryDegeneracy, "distance too large for double precision");
    const ModelPoint b = to_model(origin, Model::Ball);
    return to_model(ball_translate(b, ModelPoint::ball(std::move(w))), origin.model());
}

} // namespace hypgauss
