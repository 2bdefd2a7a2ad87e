#include <cmath>

#include "doctest.h"
#include "ringform/errors.hpp"
#include "ringform/geometry.hpp"
#include "support.hpp"

using namespace ringform;
using testing::near;

TEST_CASE("rotate: identity, quarter turn, eighth turn") {
    CHECK(near(rotate(0.0, Vec2{1, 0}), Vec2{1, 0}, 1e-15));
    CHECK(near(rotate(kPi / 2, Vec2{1, 0}), Vec2{0, 1}, 1e-15));
    CHECK(near(rotate(kPi / 4, Vec2{1, 0}), Vec2{std::sqrt(2.0) / 2, std::sqrt(2.0) / 2}, 1e-15));
}

TEST_CASE("rotate: composition law") {
    testing::Rng rng(11);
    for (int k = 0; k < 1000; ++k) {
        const double a1 = rng.uniform(-10, 10), a2 = rng.uniform(-10, 10);
        const Vec2 v = rng.point(3.0);
        CHECK(near(rotate(a1, rotate(a2, v)), rotate(a1 + a2, v), 1e-12));
    }
}

TEST_CASE("bearing: unit direction and coincidence") {
    CHECK(near(bearing({0, 0}, {1, 0}).vec(), Vec2{1, 0}, 0.0));
    CHECK(near(bearing({0, 0}, {3, 4}).vec(), Vec2{0.6, 0.8}, 1e-15));
    CHECK_THROWS_AS(bearing({1, 1}, {1, 1}), CoincidentAgents);
    CHECK_THROWS_AS(bearing({0, 0}, {5e-10, 0}), CoincidentAgents);
    CHECK_NOTHROW(bearing({0, 0}, {2e-9, 0}));
    CHECK_THROWS_AS(Bearing::from_unit({1.0, 1e-5}), Error);
}

TEST_CASE("perp: examples and orthogonality") {
    const double h = std::sqrt(2.0) / 2;
    CHECK(near(perp(Bearing::from_unit({1, 0})).vec(), Vec2{0, 1}, 0.0));
    CHECK(near(perp(Bearing::from_unit({0, 1})).vec(), Vec2{-1, 0}, 0.0));
    CHECK(near(perp(Bearing::normalized({h, h})).vec(), Vec2{-h, h}, 1e-15));
    testing::Rng rng(12);
    for (int k = 0; k < 1000; ++k) {
        const Bearing g = rng.bearing();
        CHECK(near(dot(perp(g), g), 0.0, 1e-15));
        CHECK(near(perp(g).vec(), rotate(kPi / 2, g.vec()), 1e-15));
    }
}

TEST_CASE("projection: examples, idempotence, null space, perp outer product") {
    const Mat2 p = projection(Bearing::from_unit({1, 0}));
    CHECK(p.m00 == 0.0);
    CHECK(p.m01 == 0.0);
    CHECK(p.m10 == 0.0);
    CHECK(p.m11 == 1.0);
    const Bearing g68 = Bearing::from_unit({0.6, 0.8});
    const Mat2 p68 = projection(g68);
    const Mat2 p2 = p68 * p68;
    CHECK(near(p2.m00, p68.m00, 1e-15));
    CHECK(near(p2.m01, p68.m01, 1e-15));
    CHECK(near(p2.m11, p68.m11, 1e-15));
    testing::Rng rng(13);
    for (int k = 0; k < 1000; ++k) {
        const Bearing g = rng.bearing();
        const Mat2 pg = projection(g);
        CHECK(near(pg * g.vec(), Vec2{0, 0}, 1e-15));
        CHECK(near(pg.m01, pg.m10, 0.0));
        const Mat2 q = outer(perp(g).vec(), perp(g).vec());
        CHECK(near(pg.m00, q.m00, 1e-12));
        CHECK(near(pg.m01, q.m01, 1e-12));
        CHECK(near(pg.m10, q.m10, 1e-12));
        CHECK(near(pg.m11, q.m11, 1e-12));
    }
}

TEST_CASE("perp antisymmetry: perp(gi).gj = -perp(gj).gi") {
    testing::Rng rng(14);
    for (int k = 0; k < 1000; ++k) {
        const Bearing gi = rng.bearing(), gj = rng.bearing();
        CHECK(near(dot(perp(gi), gj.vec()), -dot(perp(gj), gi.vec()), 1e-12));
    }
}

TEST_CASE("subtended_angle: examples") {
    CHECK(near(subtended_angle(Bearing::from_unit({-1, 0}), Bearing::from_unit({0, 1})), kPi / 2, 1e-15));
    const Bearing g = Bearing::normalized({0.3, -0.7});
    CHECK(subtended_angle(g, -g) == 0.0);
    CHECK(near(subtended_angle(g, g), kPi, 1e-15));
}

TEST_CASE("subtended_angle: range, definition, sine identity, rotation equivariance") {
    testing::Rng rng(15);
    for (int k = 0; k < 2000; ++k) {
        const Bearing gp = rng.bearing(), gn = rng.bearing();
        const double th = subtended_angle(gp, gn);
        CHECK(th >= 0.0);
        CHECK(th < kTwoPi);
        CHECK(near(rotate(th, (-gp).vec()), gn.vec(), 1e-12));
        CHECK(near(dot(perp(gn), gp.vec()), std::sin(th), 1e-10));
        CHECK(near(std::cos(th), -dot(gn, gp), 1e-12));
        const double alpha = rng.uniform(0, kTwoPi);
        const double rotated = subtended_angle(rotate(alpha, gp), rotate(alpha, gn));
        const double diff = std::remainder(rotated - th, kTwoPi);
        CHECK(near(diff, 0.0, 1e-10));
    }
}

TEST_CASE("angle_error: examples and range") {
    CHECK(near(angle_error(Bearing::from_unit({0, 1}), Bearing::from_unit({-1, 0}), std::cos(deg_to_rad(60))), -0.5,
               1e-15));
    CHECK(angle_error(Bearing::from_unit({-1, 0}), Bearing::from_unit({-1, 0}), 1.0) == -2.0);
    testing::Rng rng(16);
    for (int k = 0; k < 1000; ++k) {
        const Bearing gp = rng.bearing(), gn = rng.bearing();
        const double th = subtended_angle(gp, gn);
        const double c = std::cos(rng.uniform(0, kTwoPi));
        const double e = angle_error(gn, gp, c);
        CHECK(e >= -2.0);
        CHECK(e <= 2.0);
        CHECK(near(e, std::cos(th) - c, 1e-12));
        CHECK(near(angle_error(gn, gp, std::cos(th)), 0.0, 1e-12));
    }
}

TEST_CASE("normalize_angle and degree conversion") {
    CHECK(normalize_angle(kTwoPi) == 0.0);
    CHECK(normalize_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
    CHECK(normalize_angle(5 * kPi) == doctest::Approx(kPi));
    CHECK(deg_to_rad(36.0) == kPi / 5);
    CHECK(deg_to_rad(180.0) == kPi);
    CHECK(std::fabs(deg_to_rad(144.0) - 4 * kPi / 5) <= std::nextafter(4 * kPi / 5, 4.0) - 4 * kPi / 5);
    CHECK(rad_to_deg(kPi / 5) == doctest::Approx(36.0).epsilon(1e-15));
}
