#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ringform/geometry.hpp"

namespace ringform {

/// World positions of the n agents at one instant.
struct FormationState {
    std::vector<Vec2> positions;
    double time = 0.0;

    std::size_t size() const { return positions.size(); }
};

/// Per-agent target angles (radians) with their cached cosines.
class TargetFormation {
public:
    /// Throws DomainError when any angle sits at 0 or pi (within 1e-12):
    /// the controller cannot hold a collinear or occluded vertex.
    explicit TargetFormation(std::vector<double> angles_rad);

    static TargetFormation uniform(std::size_t n, double angle_rad);

    std::size_t size() const { return angles_.size(); }
    double angle(std::size_t i) const { return angles_[i]; }
    double cosine(std::size_t i) const { return cosines_[i]; }
    std::span<const double> angles() const { return angles_; }
    std::span<const double> cosines() const { return cosines_; }

    double angle_sum() const;
    /// True when the angle sum equals (n - 2k) pi for some integer k >= 1,
    /// the necessary condition a closed polygon imposes. Only a warning.
    bool angle_sum_realizable(double tol = 1e-9) const;
    std::string feasibility_warning() const;

private:
    std::vector<double> angles_;
    std::vector<double> cosines_;
};

/// Edge bearings g_i (agent i -> agent i+1) and lengths of the ring spanned
/// by `positions`. Throws CoincidentAgents for a degenerate edge.
struct EdgeSet {
    std::vector<Bearing> bearings;
    std::vector<double> lengths;
};
EdgeSet edges_of(std::span<const Vec2> positions);

/// Subtended angle at every agent, theta_i in [0, 2pi).
std::vector<double> subtended_angles(const EdgeSet& edges);

/// epsilon_i = cos(theta_i) - cos(theta_i*) for every agent.
std::vector<double> angle_errors(const EdgeSet& edges, const TargetFormation& targets);

/// Smallest distance over all pairs of agents (not only neighbours).
double min_pairwise_distance(std::span<const Vec2> positions);

}  // namespace ringform
