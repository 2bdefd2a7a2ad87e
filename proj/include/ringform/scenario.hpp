#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ringform/analysis.hpp"
#include "ringform/controller.hpp"
#include "ringform/dynamics.hpp"
#include "ringform/formation.hpp"

namespace ringform {

/// Regular (n/winding) polygon on a circle, vertex i at angle -2 pi winding i/n,
/// each vertex offset by a seeded uniform draw from the disk of radius perturb.
struct RegularGenerator {
    int winding = 1;
    double radius = 1.0;
    double perturb = 0.0;
    std::uint64_t seed = 0;
    bool operator==(const RegularGenerator&) const = default;
};

/// Ten agents, five of them on the midpoint of their neighbors' chord
/// (theta = pi), one pushed inward to a reflex angle.
struct CollinearDecagonGenerator {
    double inset = 0.15;
    bool operator==(const CollinearDecagonGenerator&) const = default;
};

using InitialSpec = std::variant<std::vector<Vec2>, RegularGenerator, CollinearDecagonGenerator>;

enum class FrameMode { none, explicit_offsets, random };

struct FrameSpec {
    FrameMode mode = FrameMode::none;
    std::vector<double> offsets_deg;  // explicit_offsets only
    std::uint64_t seed = 0;           // random only
    bool operator==(const FrameSpec&) const = default;
};

struct Scenario {
    std::string name;
    std::size_t n = 0;
    InitialSpec initial;
    std::vector<double> target_deg;
    FrameSpec frames;
    SimParams sim;

    /// Checks n consistency across fields, the winding, and theta_i* != 0, pi.
    void validate() const;
    FormationState initial_state() const;
    TargetFormation targets() const;
    /// Empty for FrameMode::none.
    std::vector<LocalFrame> local_frames() const;

    bool operator==(const Scenario&) const = default;
};

/// Throws ScenarioError unless winding is coprime with n, 1 <= winding < n/2,
/// and target_deg equals 180 (n - 2 winding)/n.
Scenario make_regular_scenario(std::size_t n, int winding, double target_deg, double perturb, std::uint64_t seed);

/// n = 10, theta* = 144 deg, started from the collinear decagon.
Scenario make_collinear_decagon_scenario(double a);

/// Deterministic canonical JSON (sorted keys, shortest round-trip doubles).
std::string serialize_scenario(const Scenario& s);
/// Throws ScenarioError with line or field context.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Replaces every seed in the scenario with RINGFORM_SEED when that variable is set.
/// Returns true if an override was applied.
bool apply_seed_override(Scenario& s);
std::optional<std::uint64_t> seed_override();

/// Tolerance for the settling time reported in summaries.
inline constexpr double kSummarySettleTol = 1e-9;

struct RunSummary {
    std::string scenario;
    std::string terminal_event;
    double terminal_time = 0.0;
    std::optional<double> settling_time;
    /// Least-squares slope of ln V over the final decade before eps_tol (a = 1 only).
    std::optional<double> exp_rate;
    analysis::BoundReport bounds;
    double min_pair_dist = 0.0;
    double max_theta_sum_drift = 0.0;
    double final_eps_inf = 0.0;
    std::size_t samples = 0;
};

/// Slope of ln V against t over the samples whose eps_inf_norm lies in
/// (eps_tol, 10 eps_tol], restricted to the stretch before the first sample
/// at or below eps_tol. Empty when fewer than three samples qualify.
std::optional<double> final_decade_slope(const TrajectoryLog& log, double eps_tol);

RunSummary summarize(const TrajectoryLog& log, const Scenario& s);

std::string trajectory_csv(const TrajectoryLog& log);
std::string summary_json(const RunSummary& summary);

/// Writes trajectory.csv, summary.json, formation.svg, errors.svg and
/// diagnostics.svg into dir, creating it if needed.
void write_outputs(const TrajectoryLog& log, const RunSummary& summary, const std::filesystem::path& dir);

}  // namespace ringform
