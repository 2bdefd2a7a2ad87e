#pragma once

#include <cmath>
#include <numbers>

namespace ringform {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Positions closer than this are treated as the same point.
inline constexpr double kCoincidenceTol = 1e-9;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3-D cross product.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Row-major 2x2 matrix.
struct Mat2 {
    double m00 = 0.0, m01 = 0.0;
    double m10 = 0.0, m11 = 0.0;

    constexpr Vec2 operator*(Vec2 v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    constexpr Mat2 transposed() const { return {m00, m10, m01, m11}; }
    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

constexpr Mat2 outer(Vec2 a, Vec2 b) { return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y}; }

/// Unit direction vector. The only way to build one is through a checked
/// factory, so every Bearing in circulation has norm 1 within 1e-12.
class Bearing {
public:
    /// Direction from `from` toward `to`. Throws CoincidentAgents when the
    /// points are closer than kCoincidenceTol.
    static Bearing between(Vec2 from, Vec2 to);
    /// Wraps a vector that is already unit length (checked).
    static Bearing from_unit(Vec2 v);
    /// Normalizes an arbitrary nonzero vector.
    static Bearing normalized(Vec2 v);

    constexpr Vec2 vec() const { return dir_; }
    constexpr double x() const { return dir_.x; }
    constexpr double y() const { return dir_.y; }
    constexpr Bearing operator-() const { return Bearing{-dir_}; }

private:
    constexpr explicit Bearing(Vec2 d) : dir_(d) {}
    Vec2 dir_;

    friend Bearing perp(Bearing g);
    friend Bearing rotate(double alpha, Bearing g);
};

constexpr double dot(Bearing a, Bearing b) { return dot(a.vec(), b.vec()); }
constexpr double dot(Bearing a, Vec2 b) { return dot(a.vec(), b); }

/// Counterclockwise rotation matrix R(alpha).
Mat2 rotation(double alpha);
Vec2 rotate(double alpha, Vec2 v);
Bearing rotate(double alpha, Bearing g);

Bearing bearing(Vec2 from, Vec2 to);

/// R(pi/2) g, exact (no trigonometry involved).
Bearing perp(Bearing g);

/// I - g g^T, the projector onto the normal line of g.
Mat2 projection(Bearing g);

/// Maps any angle into [0, 2pi).
double normalize_angle(double rad);

/// Counterclockwise angle that takes -g_prev onto g_next, in [0, 2pi).
double subtended_angle(Bearing g_prev, Bearing g_next);

/// cos(theta) - cos(theta*) written with the measured bearings:
/// -g_next . g_prev - cos_target.
double angle_error(Bearing g_next, Bearing g_prev, double cos_target);

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

}  // namespace ringform
