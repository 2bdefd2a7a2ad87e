#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version; the two must agree bit for bit (each output slot is
// written by exactly one iteration and reductions are order-free), which the
// unit tests check and the benchmark target compares for speed.

#include <cstddef>
#include <cstdint>
#include <span>

#include "ringform/controller.hpp"
#include "ringform/formation.hpp"
#include "ringform/topology.hpp"

namespace ringform::kernels {

/// Below this infinity-norm of the angle error every velocity is set to
/// exactly zero.
inline constexpr double kVelocityClampEps = 1e-13;

/// World-frame control velocities of all agents under synchronous reads.
/// Returns the infinity norm of the angle error.
double velocity_field_serial(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                             std::span<Vec2> velocity);
double velocity_field_omp(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                          std::span<Vec2> velocity);

/// Same field, but each agent runs the bearing-only pipeline in its own frame.
double velocity_field_local_serial(std::span<const Vec2> positions, std::span<const LocalFrame> frames,
                                   const TargetFormation& targets, double a, std::span<Vec2> velocity);
double velocity_field_local_omp(std::span<const Vec2> positions, std::span<const LocalFrame> frames,
                                const TargetFormation& targets, double a, std::span<Vec2> velocity);

/// Minimum of x^T A x over `sample_count` random unit vectors whose nonzero
/// entries are of mixed sign. Samples are drawn in a fixed number of
/// independently seeded chunks so the result depends only on `seed`.
double min_mixed_sign_quadratic_serial(const SquareMatrix& a, std::size_t sample_count, std::uint64_t seed);
double min_mixed_sign_quadratic_omp(const SquareMatrix& a, std::size_t sample_count, std::uint64_t seed);

/// Number of random (x, p) draws violating (sum x)^p <= sum x^p <= n^(1-p) (sum x)^p
/// beyond a relative rounding slack of 1e-12.
std::size_t lemma3_violations_serial(std::size_t draws, std::uint64_t seed);
std::size_t lemma3_violations_omp(std::size_t draws, std::uint64_t seed);

/// Fixed chunking used by the sampling kernels.
inline constexpr std::size_t kSampleChunks = 64;

}  // namespace ringform::kernels
