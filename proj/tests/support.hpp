#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ringform/formation.hpp"
#include "ringform/geometry.hpp"

namespace testing {

inline bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
inline bool near(ringform::Vec2 a, ringform::Vec2 b, double tol) { return near(a.x, b.x, tol) && near(a.y, b.y, tol); }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    ringform::Bearing bearing() { return ringform::rotate(uniform(0.0, ringform::kTwoPi), ringform::Bearing::from_unit({1, 0})); }
    ringform::Vec2 point(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

private:
    std::mt19937_64 gen_;
};

/// Clockwise regular (n/winding) polygon: subtended angles equal the interior angle 180 (n - 2w)/n.
inline std::vector<ringform::Vec2> regular_polygon(std::size_t n, int winding = 1, double radius = 1.0) {
    std::vector<ringform::Vec2> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = -ringform::kTwoPi * winding * static_cast<double>(i) / static_cast<double>(n);
        z[i] = {radius * std::cos(ang), radius * std::sin(ang)};
    }
    return z;
}

}  // namespace testing
