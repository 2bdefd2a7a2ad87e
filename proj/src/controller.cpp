#include "ringform/controller.hpp"

#include <cmath>
#include <string>

#include "ringform/errors.hpp"

namespace ringform {

void require_exponent(double a) {
    if (!(a > 0.0 && a <= 1.0)) {
        throw InvalidExponent("control exponent must lie in (0, 1], got " + std::to_string(a));
    }
}

void ControlParams::validate() const { require_exponent(a); }

double sigma(double eps, double a) {
    require_exponent(a);
    if (eps == 0.0) return 0.0;
    if (a == 1.0) return eps;
    const double mag = std::pow(std::abs(eps), a);
    return eps > 0.0 ? mag : -mag;
}

Vec2 control_velocity(Bearing g_next, Bearing g_prev, double eps, double a) {
    return sigma(eps, a) * (g_next.vec() - g_prev.vec());
}

LocalMeasurement local_measurements(std::span<const Vec2> positions, LocalFrame frame, std::size_t i) {
    const std::size_t n = positions.size();
    if (i >= n) throw DomainError("agent index out of range");
    const Vec2 self = positions[i];
    const Bearing to_next = Bearing::between(self, positions[(i + 1) % n]);
    const Bearing to_prev = Bearing::between(self, positions[(i + n - 1) % n]);
    return {rotate(-frame.offset, to_next), rotate(-frame.offset, to_prev)};
}

double local_angle_error(const LocalMeasurement& m, double cos_target) {
    // -g_i . g_{i-1} = g_i . (-g_{i-1})
    return dot(m.to_next, m.to_prev) - cos_target;
}

Vec2 agent_control(std::span<const Vec2> positions, LocalFrame frame, std::size_t i,
                   const TargetFormation& targets, double a) {
    const LocalMeasurement m = local_measurements(positions, frame, i);
    const double eps = local_angle_error(m, targets.cosine(i));
    // g_i - g_{i-1} = to_next + to_prev
    const Vec2 local_velocity = sigma(eps, a) * (m.to_next.vec() + m.to_prev.vec());
    return rotate(frame.offset, local_velocity);
}

}  // namespace ringform
