#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "ringform/controller.hpp"
#include "ringform/dynamics.hpp"
#include "ringform/errors.hpp"
#include "support.hpp"

using namespace ringform;
using testing::near;

TEST_CASE("sigma: examples, oddness, exponent domain") {
    CHECK(sigma(0.0, 0.3) == 0.0);
    CHECK(sigma(0.0, 1.0) == 0.0);
    CHECK(near(sigma(-0.25, 0.5), -0.5, 1e-15));
    CHECK(sigma(0.5, 1.0) == 0.5);
    testing::Rng rng(31);
    for (int k = 0; k < 1000; ++k) {
        const double e = rng.uniform(-2, 2), a = rng.uniform(1e-3, 1.0);
        CHECK(sigma(-e, a) == -sigma(e, a));
        CHECK(near(std::fabs(sigma(e, a)), std::pow(std::fabs(e), a), 1e-14));
    }
    CHECK_THROWS_AS(sigma(0.1, 0.0), InvalidExponent);
    CHECK_THROWS_AS(sigma(0.1, 1.5), InvalidExponent);
    CHECK_THROWS_AS(sigma(0.1, -0.2), InvalidExponent);
    CHECK_THROWS_AS(ControlParams{0.0}.validate(), InvalidExponent);
    CHECK_NOTHROW(ControlParams{1.0}.validate());
}

TEST_CASE("sigma: continuity near zero") {
    for (double a : {0.1, 0.3, 0.6, 1.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double h = 1e-2; h > 1e-30; h *= 1e-2) {
            const double jump = std::fabs(sigma(h, a) - sigma(-h, a));
            CHECK(jump <= prev);
            prev = jump;
        }
        CHECK(prev < 1e-2);
    }
}

TEST_CASE("control_velocity: examples and bisector direction") {
    const Bearing gp = Bearing::from_unit({-1, 0});
    CHECK(control_velocity(Bearing::from_unit({0, 1}), gp, 0.0, 0.5) == Vec2{0, 0});
    CHECK(near(control_velocity(gp, gp, 0.7, 1.0), Vec2{0, 0}, 0.0));
    const Vec2 v = control_velocity(Bearing::normalized({0.5, std::sqrt(3.0) / 2}), gp, 0.5, 1.0);
    CHECK(near(v, Vec2{0.75, std::sqrt(3.0) / 4}, 1e-15));
    testing::Rng rng(32);
    for (int k = 0; k < 1000; ++k) {
        const Bearing gn = rng.bearing(), gq = rng.bearing();
        const double e = rng.uniform(-2, 2), a = rng.uniform(0.05, 1.0);
        const Vec2 u = control_velocity(gn, gq, e, a);
        CHECK(norm(u) <= 2.0 * std::pow(std::fabs(e), a) + 1e-15);
        // g_next - g_prev is the sum of the two measured unit vectors g_next and -g_prev.
        CHECK(near(cross(u, gn.vec() - gq.vec()), 0.0, 1e-12));
    }
}

TEST_CASE("local_measurements: frames") {
    const std::vector<Vec2> z = {{0, 0}, {0, 1}, {-1, 0}};
    const LocalMeasurement m0 = local_measurements(z, {0.0}, 0);
    CHECK(near(m0.to_next.vec(), Vec2{0, 1}, 0.0));
    CHECK(near(m0.to_prev.vec(), Vec2{-1, 0}, 0.0));
    const LocalMeasurement m1 = local_measurements(z, {kPi / 2}, 0);
    CHECK(near(m1.to_next.vec(), Vec2{1, 0}, 1e-15));
    const std::vector<Vec2> bad = {{0, 0}, {0, 0}, {1, 1}};
    CHECK_THROWS_AS(local_measurements(bad, {0.0}, 0), CoincidentAgents);
}

TEST_CASE("local angle error equals world angle error for random offsets") {
    testing::Rng rng(33);
    for (int k = 0; k < 500; ++k) {
        std::vector<Vec2> z(5);
        for (Vec2& p : z) p = rng.point(2.0);
        const double c = std::cos(rng.uniform(0.1, 3.0));
        for (std::size_t i = 0; i < 5; ++i) {
            const Bearing gi = bearing(z[i], z[(i + 1) % 5]);
            const Bearing gim1 = bearing(z[(i + 4) % 5], z[i]);
            const double world = angle_error(gi, gim1, c);
            const double local = local_angle_error(local_measurements(z, {rng.uniform(0, kTwoPi)}, i), c);
            CHECK(near(world, local, 1e-12));
        }
    }
}

TEST_CASE("agent_control: frame equivariance and equilibrium") {
    testing::Rng rng(34);
    const TargetFormation t = TargetFormation::uniform(3, deg_to_rad(60));
    for (int k = 0; k < 500; ++k) {
        std::vector<Vec2> z = testing::regular_polygon(3);
        for (Vec2& p : z) p += 0.2 * rng.point();
        const double a = rng.uniform(0.1, 1.0);
        const std::vector<Vec2> world = velocity_field(z, t, a);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(near(agent_control(z, {0.0}, i, t, a), world[i], 0.0));
            CHECK(near(agent_control(z, {rng.uniform(0, kTwoPi)}, i, t, a), world[i], 1e-12));
        }
    }
    const std::vector<Vec2> eq = testing::regular_polygon(3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(norm(agent_control(eq, {1.234}, i, t, 0.5)) < 1e-7);
}

TEST_CASE("velocity field: translation, rotation and scale behaviour") {
    testing::Rng rng(35);
    const TargetFormation t = TargetFormation::uniform(5, deg_to_rad(36));
    for (int k = 0; k < 200; ++k) {
        std::vector<Vec2> z = testing::regular_polygon(5, 2);
        for (Vec2& p : z) p += 0.2 * rng.point();
        const double a = rng.uniform(0.1, 1.0);
        const auto v = velocity_field(z, t, a);
        const Vec2 shift = rng.point(10.0);
        const double alpha = rng.uniform(0, kTwoPi), scale = rng.uniform(0.1, 10.0);
        std::vector<Vec2> moved(5), turned(5), scaled(5);
        for (std::size_t i = 0; i < 5; ++i) {
            moved[i] = z[i] + shift;
            turned[i] = rotate(alpha, z[i]);
            scaled[i] = scale * z[i];
        }
        const auto vm = velocity_field(moved, t, a), vt = velocity_field(turned, t, a),
                   vs = velocity_field(scaled, t, a);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(near(vm[i], v[i], 1e-12));
            CHECK(near(vt[i], rotate(alpha, v[i]), 1e-12));
            CHECK(near(vs[i], v[i], 1e-12));
        }
    }
}

TEST_CASE("stationarity: zero velocity iff zero error near targets") {
    testing::Rng rng(36);
    const TargetFormation t = TargetFormation::uniform(5, deg_to_rad(36));
    const std::vector<Vec2> base = testing::regular_polygon(5, 2);
    for (int k = 0; k < 200; ++k) {
        std::vector<Vec2> z = base;
        const double mag = k % 2 == 0 ? 0.0 : rng.uniform(1e-6, 0.1);
        for (Vec2& p : z) p += mag * rng.point();
        const double a = rng.uniform(0.1, 1.0);
        const auto v = velocity_field(z, t, a);
        double vmax = 0.0;
        for (Vec2 u : v) vmax = std::max(vmax, norm(u));
        const auto eps = angle_errors(edges_of(z), t);
        double emax = 0.0;
        for (double e : eps) emax = std::max(emax, std::fabs(e));
        CHECK((vmax < 1e-9) == (emax < 1e-9));
    }
}
