#pragma once

#include <span>
#include <string>
#include <vector>

#include "ringform/dynamics.hpp"

namespace ringform::plot {

/// Floor applied before taking log10 of a magnitude.
inline constexpr double kLogFloor = 1e-16;

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    /// Draws the first point as a marker; used for agent positions.
    bool markers = false;
};

struct Panel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    /// Same scale on both axes; used for planar trajectories.
    bool equal_aspect = false;
    std::vector<Series> series;
};

/// Panels stacked vertically in one SVG document.
std::string render_svg(std::span<const Panel> panels, double width = 720.0, double panel_height = 300.0);

struct PlotSet {
    std::string formation;    // initial dashed, final solid, agent paths
    std::string errors;       // |eps_i| and V on log10 axes
    std::string diagnostics;  // rho, theta sum, min pairwise distance
};

/// Throws DomainError on an empty log.
PlotSet render_plots(const TrajectoryLog& log);

}  // namespace ringform::plot
