#pragma once

#include <cstddef>
#include <span>

#include "ringform/formation.hpp"
#include "ringform/geometry.hpp"

namespace ringform {

/// Exponent of the control law; a = 1 gives exponential convergence,
/// a in (0, 1) finite-time convergence.
struct ControlParams {
    double a = 1.0;

    /// Throws InvalidExponent unless a is in (0, 1].
    void validate() const;
};

void require_exponent(double a);

/// Rotation of an agent's body frame relative to the world frame. Fixed for a run.
struct LocalFrame {
    double offset = 0.0;  // radians, [0, 2pi)
};

/// sgn(eps) |eps|^a with sgn(0) = 0.
double sigma(double eps, double a);

/// Velocity of one agent: sigma(eps) (g_next - g_prev). Points along the
/// bisector of the subtended angle and vanishes when theta = pi.
Vec2 control_velocity(Bearing g_next, Bearing g_prev, double eps, double a);

/// What agent i actually senses, expressed in its own frame: the bearing
/// toward i+1 (g_i) and the bearing toward i-1 (-g_{i-1}).
struct LocalMeasurement {
    Bearing to_next;
    Bearing to_prev;
};

LocalMeasurement local_measurements(std::span<const Vec2> positions, LocalFrame frame, std::size_t i);

/// Angle error computed only from the local measurement pair.
double local_angle_error(const LocalMeasurement& m, double cos_target);

/// Full bearing-only pipeline for agent i: measure locally, compute the
/// error and velocity in the body frame, then map the command back to the
/// world frame.
Vec2 agent_control(std::span<const Vec2> positions, LocalFrame frame, std::size_t i,
                   const TargetFormation& targets, double a);

}  // namespace ringform
