#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ringform/controller.hpp"
#include "ringform/formation.hpp"

namespace ringform {

enum class Integrator {
    rk4,
    euler,
    /// Backward Euler in the error coordinates with the geometry frozen at
    /// the start of the step; resolves the non-Lipschitz tail of a < 1 runs.
    semi_implicit,
    /// rk4 for a = 1; for a < 1, rk4 until the error drops below
    /// `terminal_band`, semi_implicit afterwards.
    automatic,
};

std::string_view to_string(Integrator i);
Integrator integrator_from_string(std::string_view s);

struct SimParams {
    double a = 1.0;
    double dt = 1e-3;
    double t_max = 200.0;
    /// Convergence threshold on the infinity norm of the angle error.
    double eps_tol = 1e-10;
    /// Minimum allowed pairwise distance; defaults to 1e-6 x initial mean edge length.
    std::optional<double> collision_dist;
    std::size_t sample_stride = 10;
    /// Consecutive samples below eps_tol required before declaring convergence.
    std::size_t dwell_samples = 100;
    bool stop_on_converge = true;
    Integrator integrator = Integrator::automatic;
    double terminal_band = 1e-3;
    /// Agent count at which the OpenMP velocity kernel replaces the serial one.
    std::size_t parallel_threshold = 512;

    void validate() const;
    bool operator==(const SimParams&) const = default;
};

struct DiagnosticsSample {
    double time = 0.0;
    std::vector<double> eps;
    double V = 0.0;
    double rho = 0.0;  // sum of edge lengths
    double theta_sum = 0.0;
    double min_pair_dist = 0.0;
    double eps_inf_norm = 0.0;
    double V_dot_analytic = 0.0;
    /// Some theta_i within 1e-6 of pi (stalled bisector) or of 0 (occlusion).
    bool theta_stall = false;
};

enum class EventKind { converged, collision, theta_pi_stall, horizon_reached };
std::string_view to_string(EventKind k);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::horizon_reached;
    std::string detail;
};

struct TrajectoryLog {
    std::vector<DiagnosticsSample> samples;
    std::vector<FormationState> states;
    std::vector<Event> events;

    /// The converged/collision/horizon event that ended the run, if any.
    const Event* terminal() const;
    bool has_event(EventKind k) const;
    bool collision_free() const { return !has_event(EventKind::collision); }
};

/// Instantaneous diagnostics. V_dot_analytic is the closed-form derivative
/// of V along the flow, -sum_i (1/|e_i|) ((g_i^perp)^T (s_{i+1} g_{i+1} + s_i g_{i-1}))^2.
DiagnosticsSample diagnostics(const FormationState& state, const TargetFormation& targets, double a);

/// One fixed step of size params.dt for all agents, all velocities read from
/// the pre-step state. `frames`, when non-empty, makes every agent use the
/// local-frame pipeline. Throws CollisionError if two agents end closer than
/// the collision distance.
FormationState step(const FormationState& state, const TargetFormation& targets, const SimParams& params,
                    std::span<const LocalFrame> frames = {});

/// Integrates until sustained convergence, collision or t_max. Collisions
/// become a terminal event rather than an exception.
TrajectoryLog simulate(const FormationState& initial, const TargetFormation& targets, const SimParams& params,
                       std::span<const LocalFrame> frames = {});

/// First sample time after which eps_inf_norm stays below tol.
std::optional<double> settling_time(const TrajectoryLog& log, double tol);

/// Velocity field used by the integrators (exposed for tests and tools).
std::vector<Vec2> velocity_field(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                                 std::span<const LocalFrame> frames = {}, std::size_t parallel_threshold = 512);

/// Velocities applied by one semi-implicit step of size h.
std::vector<Vec2> semi_implicit_velocity(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                                         double h);

}  // namespace ringform
