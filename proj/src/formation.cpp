#include "ringform/formation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringform/errors.hpp"

namespace ringform {

TargetFormation::TargetFormation(std::vector<double> angles_rad) : angles_(std::move(angles_rad)) {
    if (angles_.size() < 3) throw InvalidOrder("target formation needs at least 3 angles");
    cosines_.reserve(angles_.size());
    for (double& a : angles_) {
        if (!std::isfinite(a)) throw DomainError("target angle must be finite");
        a = normalize_angle(a);
        if (std::abs(std::sin(a)) < 1e-12) {
            throw DomainError("target angle " + std::to_string(rad_to_deg(a)) +
                              " deg is degenerate: target angles must differ from 0 and 180 deg");
        }
        cosines_.push_back(std::cos(a));
    }
}

TargetFormation TargetFormation::uniform(std::size_t n, double angle_rad) {
    return TargetFormation(std::vector<double>(n, angle_rad));
}

double TargetFormation::angle_sum() const {
    double s = 0.0;
    for (double a : angles_) s += a;
    return s;
}

bool TargetFormation::angle_sum_realizable(double tol) const {
    const double n = static_cast<double>(angles_.size());
    const double k2 = n - angle_sum() / kPi;  // = 2k
    const double k = 0.5 * k2;
    return k >= 1.0 - tol && std::abs(k - std::round(k)) <= tol * n;
}

std::string TargetFormation::feasibility_warning() const {
    if (angle_sum_realizable()) return {};
    return "target angle sum " + std::to_string(rad_to_deg(angle_sum())) +
           " deg is not of the form (n - 2k) * 180 deg with integer k >= 1; no polygon realizes it";
}

EdgeSet edges_of(std::span<const Vec2> positions) {
    const std::size_t n = positions.size();
    EdgeSet e;
    e.bearings.reserve(n);
    e.lengths.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 from = positions[i];
        const Vec2 to = positions[(i + 1) % n];
        e.bearings.push_back(Bearing::between(from, to));
        e.lengths.push_back(norm(to - from));
    }
    return e;
}

std::vector<double> subtended_angles(const EdgeSet& edges) {
    const std::size_t n = edges.bearings.size();
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = subtended_angle(edges.bearings[(i + n - 1) % n], edges.bearings[i]);
    return theta;
}

std::vector<double> angle_errors(const EdgeSet& edges, const TargetFormation& targets) {
    const std::size_t n = edges.bearings.size();
    if (targets.size() != n) throw DomainError("target count does not match agent count");
    std::vector<double> eps(n);
    for (std::size_t i = 0; i < n; ++i)
        eps[i] = angle_error(edges.bearings[i], edges.bearings[(i + n - 1) % n], targets.cosine(i));
    return eps;
}

double min_pairwise_distance(std::span<const Vec2> positions) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j) m = std::min(m, norm(positions[i] - positions[j]));
    return m;
}

}  // namespace ringform
