#include <cmath>
#include <vector>

#include "doctest.h"
#include "ringform/errors.hpp"
#include "ringform/formation.hpp"
#include "ringform/topology.hpp"
#include "support.hpp"

using namespace ringform;
using testing::near;

namespace {

SquareMatrix laplacian(std::size_t n) {
    const SquareMatrix e = ring_incidence(n);
    return e.transposed() * e;
}

}  // namespace

TEST_CASE("RingGraph: neighbours and order") {
    const RingGraph g(5);
    CHECK(g.next(4) == 0);
    CHECK(g.prev(0) == 4);
    CHECK(g.next(2) == 3);
    CHECK_THROWS_AS(RingGraph(2), InvalidOrder);
}

TEST_CASE("ring_incidence: n = 3 pattern, E 1 = 0, rank") {
    const SquareMatrix e = ring_incidence(3);
    const double expected[3][3] = {{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(e(i, j) == expected[i][j]);
    const std::vector<double> ones(5, 1.0);
    for (double v : ring_incidence(5) * std::span<const double>(ones)) CHECK(v == 0.0);
    CHECK(numeric_rank(laplacian(4)) == 3);
    CHECK_THROWS_AS(ring_incidence(2), InvalidOrder);
}

TEST_CASE("ring Laplacian: null space, trace, closed-form lambda2") {
    for (std::size_t n = 3; n <= 50; ++n) {
        const SquareMatrix l = laplacian(n);
        CHECK(l.trace() == 2.0 * static_cast<double>(n));
        const auto ev = symmetric_eigenvalues(l);
        std::size_t zeros = 0;
        for (double v : ev) zeros += std::fabs(v) < 1e-9;
        CHECK(zeros == 1);
        CHECK(near(ev[1], ring_lambda2(n), 1e-10));
        CHECK(ring_lambda2(n) / static_cast<double>(n) <= 2.0 / static_cast<double>(n - 1));
    }
    for (std::size_t n = 51; n <= 1000; ++n)
        CHECK(ring_lambda2(n) / static_cast<double>(n) <= 2.0 / static_cast<double>(n - 1));
    CHECK(near(ring_lambda2(3), 3.0, 1e-14));
    CHECK(near(ring_lambda2(4), 2.0, 1e-14));
    CHECK_THROWS_AS(ring_lambda2(2), InvalidOrder);
}

TEST_CASE("symmetric_eigenvalues: examples") {
    const auto id = symmetric_eigenvalues(SquareMatrix::identity(3));
    for (double v : id) CHECK(near(v, 1.0, 1e-15));
    const auto e3 = symmetric_eigenvalues(laplacian(3));
    CHECK(near(e3[0], 0.0, 1e-12));
    CHECK(near(e3[1], 3.0, 1e-12));
    CHECK(near(e3[2], 3.0, 1e-12));
    const auto e4 = symmetric_eigenvalues(laplacian(4));
    const double want[] = {0, 2, 2, 4};
    for (int k = 0; k < 4; ++k) CHECK(near(e4[k], want[k], 1e-12));
    SquareMatrix bad(2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(symmetric_eigenvalues(bad), NotSymmetric);
}

TEST_CASE("symmetric_eigen: random symmetric matrices reconstruct") {
    testing::Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 9;
        SquareMatrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.uniform(-2, 2);
        const SymmetricEigen eig = symmetric_eigen(a);
        for (std::size_t k = 1; k < n; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
        double tr = 0.0;
        for (double v : eig.values) tr += v;
        CHECK(near(tr, a.trace(), 1e-11));
        for (std::size_t k = 0; k < n; ++k) {
            const auto av = a * std::span<const double>(eig.vectors[k]);
            for (std::size_t i = 0; i < n; ++i) CHECK(near(av[i], eig.values[k] * eig.vectors[k][i], 1e-10));
        }
    }
}

TEST_CASE("symmetric_eigenvalues: PSD input gives nonnegative spectrum") {
    testing::Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + trial % 6;
        SquareMatrix b(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = rng.normal();
        const auto ev = symmetric_eigenvalues(b.transposed() * b);
        for (double v : ev) CHECK(v >= -1e-9);
    }
}

TEST_CASE("bearing_diagonal: equilateral, collinear, reflex") {
    // Clockwise order makes each subtended angle the interior angle.
    const std::vector<Vec2> cw = {{0, 0}, {0.5, std::sqrt(3.0) / 2}, {1, 0}};
    const SquareMatrix d = bearing_diagonal(edges_of(cw).bearings);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(near(d(i, i), std::sin(kPi / 3), 1e-15));
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(d(i, j) == 0.0);
    }
    // Counterclockwise order measures 2pi - 60 deg at every vertex.
    const std::vector<Vec2> ccw = {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
    const SquareMatrix dc = bearing_diagonal(edges_of(ccw).bearings);
    for (std::size_t i = 0; i < 3; ++i) CHECK(near(dc(i, i), -std::sin(kPi / 3), 1e-15));

    // Agent 1 is the midpoint of its neighbours: theta_1 = pi.
    const std::vector<Vec2> collinear = {{0, 0}, {1, 0}, {2, 0}, {1, -1}};
    CHECK(near(bearing_diagonal(edges_of(collinear).bearings)(1, 1), 0.0, 1e-15));

    // theta_1 = 3pi/2: -g_0 = (-1,0) rotated by 3pi/2 gives (0,1).
    const std::vector<Vec2> reflex = {{-1, 0}, {0, 0}, {0, 1}, {-1, 2}};
    const auto e = edges_of(reflex);
    CHECK(near(subtended_angles(e)[1], 3 * kPi / 2, 1e-15));
    CHECK(near(bearing_diagonal(e.bearings)(1, 1), -1.0, 1e-15));
}

TEST_CASE("bearing_diagonal: entries in [-1, 1] and D^T D = D^2") {
    testing::Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec2> z(3 + trial % 6);
        for (Vec2& p : z) p = rng.point(2.0);
        const SquareMatrix d = bearing_diagonal(edges_of(z).bearings);
        const SquareMatrix dtd = d.transposed() * d, d2 = d * d;
        for (std::size_t i = 0; i < z.size(); ++i) {
            CHECK(std::fabs(d(i, i)) <= 1.0);
            CHECK(dtd(i, i) == d2(i, i));
        }
    }
}

TEST_CASE("numeric_rank threshold scales with the matrix") {
    SquareMatrix big = laplacian(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) big(i, j) *= 1e6;
    CHECK(numeric_rank(big) == 5);
    CHECK(zero_eigenvalue_threshold(big) > zero_eigenvalue_threshold(laplacian(6)));
}

TEST_CASE("solve_spd") {
    SquareMatrix a(2);
    a(0, 0) = 4;
    a(0, 1) = a(1, 0) = 1;
    a(1, 1) = 3;
    const std::vector<double> b = {1, 2};
    const auto x = solve_spd(a, b);
    CHECK(near(4 * x[0] + x[1], 1.0, 1e-14));
    CHECK(near(x[0] + 3 * x[1], 2.0, 1e-14));
    CHECK_THROWS_AS(solve_spd(laplacian(3), std::vector<double>{1, 0, 0}), DomainError);
}
