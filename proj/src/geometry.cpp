#include "ringform/geometry.hpp"

#include <string>

#include "ringform/errors.hpp"

namespace ringform {

Bearing Bearing::between(Vec2 from, Vec2 to) {
    const Vec2 d = to - from;
    const double len = norm(d);
    if (!(len > kCoincidenceTol)) {
        throw CoincidentAgents("bearing undefined: points are " + std::to_string(len) + " apart");
    }
    return Bearing{d * (1.0 / len)};
}

Bearing Bearing::from_unit(Vec2 v) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || std::abs(norm(v) - 1.0) > 1e-12) {
        throw DomainError("bearing must be a finite unit vector");
    }
    return Bearing{v};
}

Bearing Bearing::normalized(Vec2 v) {
    const double len = norm(v);
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw DomainError("cannot normalize a zero or non-finite vector");
    }
    return Bearing{v * (1.0 / len)};
}

Mat2 rotation(double alpha) {
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return {c, -s, s, c};
}

Vec2 rotate(double alpha, Vec2 v) { return rotation(alpha) * v; }

Bearing rotate(double alpha, Bearing g) { return Bearing{rotation(alpha) * g.dir_}; }

Bearing bearing(Vec2 from, Vec2 to) { return Bearing::between(from, to); }

Bearing perp(Bearing g) { return Bearing{{-g.dir_.y, g.dir_.x}}; }

Mat2 projection(Bearing g) {
    const Mat2 gg = outer(g.vec(), g.vec());
    return {1.0 - gg.m00, -gg.m01, -gg.m10, 1.0 - gg.m11};
}

double normalize_angle(double rad) {
    double r = std::fmod(rad, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double subtended_angle(Bearing g_prev, Bearing g_next) {
    const Vec2 u = -g_prev.vec();
    return normalize_angle(std::atan2(cross(u, g_next.vec()), dot(u, g_next.vec())));
}

double angle_error(Bearing g_next, Bearing g_prev, double cos_target) {
    return -dot(g_next, g_prev) - cos_target;
}

}  // namespace ringform
