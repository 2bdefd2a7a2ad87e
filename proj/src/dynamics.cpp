#include "ringform/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ringform/analysis.hpp"
#include "ringform/errors.hpp"
#include "ringform/kernels.hpp"
#include "ringform/topology.hpp"

namespace ringform {

std::string_view to_string(Integrator i) {
    switch (i) {
        case Integrator::rk4: return "rk4";
        case Integrator::euler: return "euler";
        case Integrator::semi_implicit: return "semi_implicit";
        case Integrator::automatic: return "auto";
    }
    return "auto";
}

Integrator integrator_from_string(std::string_view s) {
    if (s == "rk4") return Integrator::rk4;
    if (s == "euler") return Integrator::euler;
    if (s == "semi_implicit") return Integrator::semi_implicit;
    if (s == "auto") return Integrator::automatic;
    throw DomainError("unknown integrator '" + std::string(s) + "'");
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::converged: return "Converged";
        case EventKind::collision: return "Collision";
        case EventKind::theta_pi_stall: return "ThetaPiStall";
        case EventKind::horizon_reached: return "HorizonReached";
    }
    return "?";
}

void SimParams::validate() const {
    require_exponent(a);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
    if (!(eps_tol > 0.0)) throw DomainError("eps_tol must be positive");
    if (collision_dist && !(*collision_dist >= kCoincidenceTol))
        throw DomainError("collision_dist must be at least the coincidence tolerance");
    if (sample_stride == 0) throw DomainError("sample_stride must be positive");
    if (dwell_samples == 0) throw DomainError("dwell_samples must be positive");
    if (!(terminal_band > 0.0)) throw DomainError("terminal_band must be positive");
}

const Event* TrajectoryLog::terminal() const {
    for (const Event& e : events)
        if (e.kind != EventKind::theta_pi_stall) return &e;
    return nullptr;
}

bool TrajectoryLog::has_event(EventKind k) const {
    return std::any_of(events.begin(), events.end(), [k](const Event& e) { return e.kind == k; });
}

namespace {

constexpr double kNullRoundoffFloor = 64.0 * std::numeric_limits<double>::epsilon();

bool near_degenerate_angle(double theta) {
    constexpr double kBand = 1e-6;
    return std::abs(theta - kPi) < kBand || theta < kBand || theta > kTwoPi - kBand;
}

double mean_edge_length(std::span<const Vec2> z) {
    const EdgeSet e = edges_of(z);
    double s = 0.0;
    for (double l : e.lengths) s += l;
    return s / static_cast<double>(z.size());
}

double resolve_collision_dist(const SimParams& p, std::span<const Vec2> z) {
    return p.collision_dist ? *p.collision_dist : std::max(kCoincidenceTol, 1e-6 * mean_edge_length(z));
}

void check_collision(std::span<const Vec2> z, double collision_dist) {
    const double d = min_pairwise_distance(z);
    if (d < collision_dist) {
        std::ostringstream os;
        os << "agents " << d << " apart, below collision distance " << collision_dist;
        throw CollisionError(os.str());
    }
}

// Solves  sigma^{-1}(s) + h M s = eps  for s, M = D E^T L E D, by damped
// Newton on the strictly convex potential
//   Phi(s) = sum a/(a+1) |s_i|^{(a+1)/a} + h/2 s^T M s - eps^T s.
std::vector<double> implicit_sigma(const SquareMatrix& m, std::span<const double> eps, double a, double h) {
    const std::size_t n = eps.size();
    const double q = 1.0 / a;
    auto phi = [&](std::span<const double> s) {
        const std::vector<double> ms = m * s;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            v += a / (a + 1.0) * std::pow(std::abs(s[i]), q + 1.0) + 0.5 * h * s[i] * ms[i] - eps[i] * s[i];
        return v;
    };
    auto residual = [&](std::span<const double> s) {
        std::vector<double> r = m * s;
        for (std::size_t i = 0; i < n; ++i) {
            const double inv = s[i] == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s[i]), q), s[i]);
            r[i] = inv + h * r[i] - eps[i];
        }
        return r;
    };
    auto inf_norm = [](std::span<const double> v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = sigma(eps[i], a);
    const double eps_scale = inf_norm(eps);
    const double target = 1e-15 * eps_scale;

    std::vector<double> r = residual(s);
    double f = phi(s);
    for (int iter = 0; iter < 100 && inf_norm(r) > target; ++iter) {
        SquareMatrix hess(n);
        double diag_scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) hess(i, j) = h * m(i, j);
            hess(i, i) += q * std::pow(std::abs(s[i]), q - 1.0);
            diag_scale = std::max(diag_scale, hess(i, i));
        }
        const double mu = 1e-14 * std::max(diag_scale, std::numeric_limits<double>::min());
        for (std::size_t i = 0; i < n; ++i) hess(i, i) += mu;
        std::vector<double> d = solve_spd(hess, r);
        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = -d[i];
            slope += r[i] * d[i];
        }
        double t = 1.0;
        std::vector<double> trial(n);
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = s[i] + t * d[i];
            const double ft = phi(trial);
            if (ft <= f + 1e-4 * t * slope) {
                f = ft;
                moved = true;
                break;
            }
        }
        if (!moved) break;
        s = trial;
        r = residual(s);
    }
    return s;
}

struct Rhs {
    const TargetFormation& targets;
    double a;
    std::span<const LocalFrame> frames;
    std::size_t parallel_threshold;

    double operator()(std::span<const Vec2> z, std::span<Vec2> v) const {
        const bool par = z.size() >= parallel_threshold;
        if (frames.empty())
            return par ? kernels::velocity_field_omp(z, targets, a, v) : kernels::velocity_field_serial(z, targets, a, v);
        return par ? kernels::velocity_field_local_omp(z, frames, targets, a, v)
                   : kernels::velocity_field_local_serial(z, frames, targets, a, v);
    }
};

// Reusable stage buffers for the explicit integrators.
class Stepper {
public:
    Stepper(const TargetFormation& targets, const SimParams& params, std::span<const LocalFrame> frames)
        : rhs_{targets, params.a, frames, params.parallel_threshold}, params_(params) {}

    void advance(std::vector<Vec2>& z) {
        const std::size_t n = z.size();
        k1_.resize(n); k2_.resize(n); k3_.resize(n); k4_.resize(n); tmp_.resize(n);
        const double h = params_.dt;
        const double eps_inf = rhs_(z, k1_);

        Integrator mode = params_.integrator;
        if (mode == Integrator::automatic) {
            mode = (params_.a < 1.0 && eps_inf < params_.terminal_band) ? Integrator::semi_implicit : Integrator::rk4;
        }
        switch (mode) {
            case Integrator::euler:
                for (std::size_t i = 0; i < n; ++i) z[i] += h * k1_[i];
                return;
            case Integrator::semi_implicit: {
                if (eps_inf < kernels::kVelocityClampEps) return;
                const std::vector<Vec2> v = semi_implicit_velocity(z, rhs_.targets, params_.a, h);
                for (std::size_t i = 0; i < n; ++i) z[i] += h * v[i];
                return;
            }
            default: break;
        }
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = z[i] + (0.5 * h) * k1_[i];
        rhs_(tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = z[i] + (0.5 * h) * k2_[i];
        rhs_(tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = z[i] + h * k3_[i];
        rhs_(tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i) z[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    Rhs rhs_;
    const SimParams& params_;
    std::vector<Vec2> k1_, k2_, k3_, k4_, tmp_;
};

void validate_inputs(const FormationState& state, const TargetFormation& targets, std::span<const LocalFrame> frames) {
    if (state.size() < 3) throw InvalidOrder("need at least 3 agents");
    if (targets.size() != state.size()) throw DomainError("target count does not match agent count");
    if (!frames.empty() && frames.size() != state.size()) throw DomainError("one local frame per agent required");
    for (const Vec2& p : state.positions)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("non-finite agent position");
}

}  // namespace

std::vector<Vec2> velocity_field(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                                 std::span<const LocalFrame> frames, std::size_t parallel_threshold) {
    std::vector<Vec2> v(positions.size());
    Rhs{targets, a, frames, parallel_threshold}(positions, v);
    return v;
}

std::vector<Vec2> semi_implicit_velocity(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                                         double h) {
    require_exponent(a);
    const std::size_t n = positions.size();
    const EdgeSet edges = edges_of(positions);
    const std::vector<double> eps = angle_errors(edges, targets);
    std::vector<Vec2> v(n);
    double eps_inf = 0.0;
    for (double e : eps) eps_inf = std::max(eps_inf, std::abs(e));
    if (eps_inf < kernels::kVelocityClampEps) return v;

    // d eps / dt = -M sigma with M = D E^T L E D, L = diag(1/|e_i|)
    std::vector<double> d(n), inv_len(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = dot(perp(edges.bearings[i]), edges.bearings[(i + n - 1) % n]);
        inv_len[i] = 1.0 / edges.lengths[i];
    }
    SquareMatrix m(n);
    for (std::size_t k = 0; k < n; ++k) {
        // edge k couples agents k and k+1 with weight inv_len[k]
        const std::size_t i = k, j = (k + 1) % n;
        m(i, i) += d[i] * d[i] * inv_len[k];
        m(j, j) += d[j] * d[j] * inv_len[k];
        m(i, j) -= d[i] * d[j] * inv_len[k];
        m(j, i) -= d[i] * d[j] * inv_len[k];
    }
    // M u = 0 for u_i = 1/d_i. A null component at roundoff level carries no information and the inverse of
    // sigma would amplify it into an O(1e-5) drift.
    std::vector<double> e = eps;
    double ue = 0.0, uu = 0.0;
    bool has_null = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d[i]) < 1e-8) has_null = false;
        if (!has_null) break;
        ue += e[i] / d[i];
        uu += 1.0 / (d[i] * d[i]);
    }
    if (has_null && std::abs(ue) / std::sqrt(uu) < kNullRoundoffFloor)
        for (std::size_t i = 0; i < n; ++i) e[i] -= ue / uu / d[i];
    const std::vector<double> s = implicit_sigma(m, e, a, h);
    for (std::size_t i = 0; i < n; ++i) v[i] = s[i] * (edges.bearings[i].vec() - edges.bearings[(i + n - 1) % n].vec());
    return v;
}

DiagnosticsSample diagnostics(const FormationState& state, const TargetFormation& targets, double a) {
    require_exponent(a);
    const std::size_t n = state.size();
    if (targets.size() != n) throw DomainError("target count does not match agent count");
    const EdgeSet edges = edges_of(state.positions);

    DiagnosticsSample s;
    s.time = state.time;
    s.eps = angle_errors(edges, targets);
    s.V = analysis::lyapunov(s.eps, a);
    for (double l : edges.lengths) s.rho += l;
    const std::vector<double> theta = subtended_angles(edges);
    for (double t : theta) {
        s.theta_sum += t;
        s.theta_stall = s.theta_stall || near_degenerate_angle(t);
    }
    s.min_pair_dist = min_pairwise_distance(state.positions);
    for (double e : s.eps) s.eps_inf_norm = std::max(s.eps_inf_norm, std::abs(e));

    std::vector<double> sig(n);
    for (std::size_t i = 0; i < n; ++i) sig[i] = sigma(s.eps[i], a);
    double vdot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
        const Vec2 w = sig[ip] * edges.bearings[ip].vec() + sig[i] * edges.bearings[im].vec();
        const double proj = dot(perp(edges.bearings[i]), w);
        vdot -= proj * proj / edges.lengths[i];
    }
    s.V_dot_analytic = vdot;
    return s;
}

FormationState step(const FormationState& state, const TargetFormation& targets, const SimParams& params,
                    std::span<const LocalFrame> frames) {
    params.validate();
    validate_inputs(state, targets, frames);
    const double collision_dist = resolve_collision_dist(params, state.positions);
    check_collision(state.positions, collision_dist);
    FormationState next = state;
    Stepper(targets, params, frames).advance(next.positions);
    next.time = state.time + params.dt;
    check_collision(next.positions, collision_dist);
    return next;
}

TrajectoryLog simulate(const FormationState& initial, const TargetFormation& targets, const SimParams& params,
                       std::span<const LocalFrame> frames) {
    params.validate();
    validate_inputs(initial, targets, frames);
    const double collision_dist = resolve_collision_dist(params, initial.positions);

    TrajectoryLog log;
    try {
        check_collision(initial.positions, collision_dist);
    } catch (const CollisionError& e) {
        log.samples.push_back(diagnostics(initial, targets, params.a));
        log.states.push_back(initial);
        log.events.push_back({initial.time, EventKind::collision, e.what()});
        return log;
    }
    FormationState state = initial;
    Stepper stepper(targets, params, frames);

    std::size_t dwell = 0;
    double dwell_start = 0.0;
    bool converged = false;
    bool stalled = false;
    std::vector<double> last_theta;

    auto record = [&](const FormationState& st) -> bool {
        DiagnosticsSample d = diagnostics(st, targets, params.a);
        const std::vector<double> theta = subtended_angles(edges_of(st.positions));
        std::string detail;
        if (!last_theta.empty()) {
            for (std::size_t i = 0; i < theta.size(); ++i)
                if (std::abs(theta[i] - last_theta[i]) > kPi) {
                    d.theta_stall = true;
                    detail = "theta_" + std::to_string(i + 1) + " wrapped through 0";
                }
        }
        last_theta = theta;
        if (d.theta_stall && !stalled) {
            if (detail.empty()) {
                for (std::size_t i = 0; i < theta.size(); ++i)
                    if (near_degenerate_angle(theta[i])) detail += (detail.empty() ? "theta_" : ", theta_") + std::to_string(i + 1);
                detail += " degenerate";
            }
            log.events.push_back({st.time, EventKind::theta_pi_stall, detail});
        }
        stalled = d.theta_stall;

        const bool below = d.eps_inf_norm < params.eps_tol;
        log.samples.push_back(std::move(d));
        log.states.push_back(st);
        if (!below) {
            dwell = 0;
            return false;
        }
        if (dwell++ == 0) dwell_start = st.time;
        if (!converged && dwell >= params.dwell_samples) {
            converged = true;
            log.events.push_back({dwell_start, EventKind::converged, {}});
            return params.stop_on_converge;
        }
        return false;
    };

    if (record(state)) return log;

    const auto total_steps = static_cast<std::size_t>(std::ceil(params.t_max / params.dt - 1e-9));
    for (std::size_t k = 1; k <= total_steps; ++k) {
        try {
            stepper.advance(state.positions);
            state.time = initial.time + static_cast<double>(k) * params.dt;
            check_collision(state.positions, collision_dist);
        } catch (const CollisionError& e) {
            log.events.push_back({initial.time + static_cast<double>(k) * params.dt, EventKind::collision, e.what()});
            return log;
        } catch (const CoincidentAgents& e) {
            log.events.push_back({initial.time + static_cast<double>(k) * params.dt, EventKind::collision, e.what()});
            return log;
        }
        if (k % params.sample_stride == 0 || k == total_steps) {
            if (record(state)) return log;
        }
    }
    if (!converged) log.events.push_back({state.time, EventKind::horizon_reached, {}});
    return log;
}

std::optional<double> settling_time(const TrajectoryLog& log, double tol) {
    if (log.samples.empty()) throw DomainError("settling_time needs a nonempty log");
    std::optional<double> t;
    for (const DiagnosticsSample& s : log.samples) {
        if (s.eps_inf_norm < tol) {
            if (!t) t = s.time;
        } else {
            t.reset();
        }
    }
    return t;
}

}  // namespace ringform
