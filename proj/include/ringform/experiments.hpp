#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ringform/scenario.hpp"

namespace ringform::experiments {

/// Seed of the perturbed pentagram start used by the five-agent reproduction.
inline constexpr std::uint64_t kFig3Seed = 42;
inline constexpr double kFig3Perturb = 0.3;

/// n = 5, winding 2, theta* = 36 deg, perturb 0.3, seed kFig3Seed.
Scenario fig3_scenario(double a);
/// Collinear decagon start, theta* = 144 deg.
Scenario fig4_scenario(double a);

struct RunResult {
    Scenario scenario;
    TrajectoryLog log;
    RunSummary summary;
    double wall_seconds = 0.0;
    /// Set when the run threw; log and summary are then empty.
    std::string error;
};

RunResult run_scenario(const Scenario& s);

/// "fig3" runs a = 1 and a = 0.3; "fig4" runs a = 1 and a = 0.6.
std::vector<Scenario> reproduction_scenarios(std::string_view figure);

enum class SweepParam { a, dt, perturb };
SweepParam sweep_param_from_string(std::string_view s);

/// One scenario per value; perturb needs a regular generator.
std::vector<Scenario> sweep_scenarios(const Scenario& base, SweepParam param, std::span<const double> values);

/// Runs the scenarios concurrently, one per OpenMP iteration; results keep input order.
std::vector<RunResult> run_all(std::span<const Scenario> scenarios);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Lemma, constant and invariant checks that hold for every correct build.
std::vector<Check> verify_suite(std::uint64_t seed);

/// Largest x(t) on [0, horizon] for the extremal system
/// xdot = exp(-int_0^t k/x), x(0) = x0, integrated with RK4.
double lemma2_extremal_max(double k, double x0, double horizon, double dt);

}  // namespace ringform::experiments
