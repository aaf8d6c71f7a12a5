#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "usf/planar_map.hpp"

namespace usf {

using Point = std::array<double, 2>;

/// signed hyperbolic distance from the origin to |t| along a ray,
/// d(0,t) = log((1+t)/(1-t)); negative t gives the signed value
inline double disc_distance_from_origin(double t) { return std::log((1.0 + t) / (1.0 - t)); }

/// hyperbolic distance in the Poincare disc, 2 artanh(|z-w| / |1 - conj(z) w|)
inline double disc_distance(const Point& z, const Point& w) {
    const double dx = z[0] - w[0], dy = z[1] - w[1];
    const double num = std::sqrt(dx * dx + dy * dy);
    const double cx = 1.0 - (z[0] * w[0] + z[1] * w[1]);
    const double cy = z[0] * w[1] - z[1] * w[0];  // -Im(conj(z) w) sign-safe in the modulus
    const double den = std::sqrt(cx * cx + cy * cy);
    return 2.0 * std::atanh(num / den);
}

struct HyperbolicCircle {
    double radius = 0.0;  // hyperbolic radius
    Point centre{0.0, 0.0};  // hyperbolic centre in disc coordinates
};

/**
 * Hyperbolic radius and centre of a Euclidean disc inside the unit disc:
 * half the difference / sum of the signed distances to the near and far
 * points along the ray through the centre. Handles discs containing the
 * origin through the signed convention.
 */
inline HyperbolicCircle hyperbolic_circle_of(const Point& z, double r) {
    const double m = std::sqrt(z[0] * z[0] + z[1] * z[1]);
    if (m + r >= 1.0) throw Error("disc is not strictly inside the unit disc");
    const double far = disc_distance_from_origin(m + r);
    const double near = disc_distance_from_origin(m - r);
    HyperbolicCircle out;
    out.radius = 0.5 * (far - near);
    const double centre_dist = 0.5 * (far + near);  // signed
    const double t = std::tanh(centre_dist / 2.0);
    if (m > 0.0) {
        out.centre = {t * z[0] / m, t * z[1] / m};
    } else {
        out.centre = {0.0, 0.0};
    }
    return out;
}

inline double hyperbolic_radius_of(const Point& z, double r) {
    return hyperbolic_circle_of(z, r).radius;
}

/// area of a hyperbolic disc, 4 pi sinh^2(r/2)
inline double hyperbolic_disc_area(double hyperbolic_radius) {
    const double s = std::sinh(hyperbolic_radius / 2.0);
    return 4.0 * std::numbers::pi * s * s;
}

} // namespace usf
