#include "ringform/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <vector>

#include "ringform/analysis.hpp"
#include "ringform/errors.hpp"

namespace ringform::kernels {

namespace {

struct AgentEval {
    Vec2 velocity;
    double eps;
};

AgentEval eval_agent(std::span<const Vec2> z, const TargetFormation& targets, double a, std::size_t i) {
    const std::size_t n = z.size();
    const Bearing g_next = Bearing::between(z[i], z[(i + 1) % n]);
    const Bearing g_prev = Bearing::between(z[(i + n - 1) % n], z[i]);
    const double eps = angle_error(g_next, g_prev, targets.cosine(i));
    return {control_velocity(g_next, g_prev, eps, a), eps};
}

AgentEval eval_agent_local(std::span<const Vec2> z, std::span<const LocalFrame> frames,
                           const TargetFormation& targets, double a, std::size_t i) {
    const LocalMeasurement m = local_measurements(z, frames[i], i);
    const double eps = local_angle_error(m, targets.cosine(i));
    const Vec2 local_velocity = sigma(eps, a) * (m.to_next.vec() + m.to_prev.vec());
    return {rotate(frames[i].offset, local_velocity), eps};
}

void check_sizes(std::span<const Vec2> z, const TargetFormation& targets, std::span<Vec2> v) {
    if (z.size() < 3) throw InvalidOrder("need at least 3 agents");
    if (targets.size() != z.size() || v.size() != z.size()) throw DomainError("size mismatch in velocity field");
}

double clamp_if_converged(double max_eps, std::span<Vec2> v) {
    if (max_eps < kVelocityClampEps) std::fill(v.begin(), v.end(), Vec2{});
    return max_eps;
}

template <class Eval>
double field_serial(std::size_t n, std::span<Vec2> v, Eval&& eval) {
    double max_eps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const AgentEval e = eval(i);
        v[i] = e.velocity;
        max_eps = std::max(max_eps, std::abs(e.eps));
    }
    return clamp_if_converged(max_eps, v);
}

template <class Eval>
double field_omp(std::size_t n, std::span<Vec2> v, Eval&& eval) {
    double max_eps = 0.0;
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for reduction(max : max_eps) schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const AgentEval e = eval(static_cast<std::size_t>(i));
            v[static_cast<std::size_t>(i)] = e.velocity;
            max_eps = std::max(max_eps, std::abs(e.eps));
        } catch (...) {
#pragma omp critical(ringform_field_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return clamp_if_converged(max_eps, v);
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::size_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk)};
    return std::mt19937_64(seq);
}

std::size_t chunk_share(std::size_t total, std::size_t chunk) {
    return total / kSampleChunks + (chunk < total % kSampleChunks ? 1 : 0);
}

double mixed_sign_chunk(const SquareMatrix& a, std::size_t samples, std::uint64_t seed, std::size_t chunk) {
    const std::size_t n = a.order();
    std::mt19937_64 rng = chunk_rng(seed, chunk);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(n);
    double best = std::numeric_limits<double>::infinity();
    std::size_t accepted = 0;
    while (accepted < samples) {
        double nrm2 = 0.0;
        for (double& xi : x) {
            xi = normal(rng);
            nrm2 += xi * xi;
        }
        if (!(nrm2 > 0.0) || !analysis::mixed_sign_check(x)) continue;
        const double inv = 1.0 / std::sqrt(nrm2);
        for (double& xi : x) xi *= inv;
        best = std::min(best, a.quadratic_form(x));
        ++accepted;
    }
    return best;
}

bool lemma3_draw_violates(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = len(rng);
    // every fourth draw uses p = 1 exactly, where all three sides must agree
    const bool exact = unit(rng) < 0.25;
    const double p = exact ? 1.0 : std::max(unit(rng), 1e-6);
    std::vector<double> x(static_cast<std::size_t>(n));
    const double scale = std::pow(10.0, 6.0 * unit(rng) - 3.0);
    for (double& xi : x) xi = unit(rng) < 0.15 ? 0.0 : scale * unit(rng);
    const analysis::Lemma3Sides s = analysis::lemma3_check(x, p);
    if (exact) return !(s.left == s.middle && s.middle == s.right);
    const double slack = 1e-12 * std::max({s.left, s.middle, s.right, std::numeric_limits<double>::min()});
    return s.left > s.middle + slack || s.middle > s.right + slack;
}

std::size_t lemma3_chunk(std::size_t draws, std::uint64_t seed, std::size_t chunk) {
    std::mt19937_64 rng = chunk_rng(seed ^ 0x9e3779b97f4a7c15ULL, chunk);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < draws; ++k) bad += lemma3_draw_violates(rng) ? 1 : 0;
    return bad;
}

void check_oracle_input(const SquareMatrix& a, std::size_t sample_count) {
    if (a.order() < 2) throw DomainError("sampling needs order >= 2");
    if (sample_count == 0) throw DomainError("sample_count must be positive");
}

}  // namespace

double velocity_field_serial(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                             std::span<Vec2> velocity) {
    check_sizes(positions, targets, velocity);
    require_exponent(a);
    return field_serial(positions.size(), velocity,
                        [&](std::size_t i) { return eval_agent(positions, targets, a, i); });
}

double velocity_field_omp(std::span<const Vec2> positions, const TargetFormation& targets, double a,
                          std::span<Vec2> velocity) {
    check_sizes(positions, targets, velocity);
    require_exponent(a);
    return field_omp(positions.size(), velocity,
                     [&](std::size_t i) { return eval_agent(positions, targets, a, i); });
}

double velocity_field_local_serial(std::span<const Vec2> positions, std::span<const LocalFrame> frames,
                                   const TargetFormation& targets, double a, std::span<Vec2> velocity) {
    check_sizes(positions, targets, velocity);
    require_exponent(a);
    if (frames.size() != positions.size()) throw DomainError("one local frame per agent required");
    return field_serial(positions.size(), velocity,
                        [&](std::size_t i) { return eval_agent_local(positions, frames, targets, a, i); });
}

double velocity_field_local_omp(std::span<const Vec2> positions, std::span<const LocalFrame> frames,
                                const TargetFormation& targets, double a, std::span<Vec2> velocity) {
    check_sizes(positions, targets, velocity);
    require_exponent(a);
    if (frames.size() != positions.size()) throw DomainError("one local frame per agent required");
    return field_omp(positions.size(), velocity,
                     [&](std::size_t i) { return eval_agent_local(positions, frames, targets, a, i); });
}

double min_mixed_sign_quadratic_serial(const SquareMatrix& a, std::size_t sample_count, std::uint64_t seed) {
    check_oracle_input(a, sample_count);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < kSampleChunks; ++c) {
        const std::size_t share = chunk_share(sample_count, c);
        if (share) best = std::min(best, mixed_sign_chunk(a, share, seed, c));
    }
    return best;
}

double min_mixed_sign_quadratic_omp(const SquareMatrix& a, std::size_t sample_count, std::uint64_t seed) {
    check_oracle_input(a, sample_count);
    double best = std::numeric_limits<double>::infinity();
    const auto chunks = static_cast<std::ptrdiff_t>(kSampleChunks);
#pragma omp parallel for reduction(min : best) schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        const std::size_t share = chunk_share(sample_count, static_cast<std::size_t>(c));
        if (share) best = std::min(best, mixed_sign_chunk(a, share, seed, static_cast<std::size_t>(c)));
    }
    return best;
}

std::size_t lemma3_violations_serial(std::size_t draws, std::uint64_t seed) {
    std::size_t bad = 0;
    for (std::size_t c = 0; c < kSampleChunks; ++c) bad += lemma3_chunk(chunk_share(draws, c), seed, c);
    return bad;
}

std::size_t lemma3_violations_omp(std::size_t draws, std::uint64_t seed) {
    std::size_t bad = 0;
    const auto chunks = static_cast<std::ptrdiff_t>(kSampleChunks);
#pragma omp parallel for reduction(+ : bad) schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < chunks; ++c)
        bad += lemma3_chunk(chunk_share(draws, static_cast<std::size_t>(c)), seed, static_cast<std::size_t>(c));
    return bad;
}

}  // namespace ringform::kernels
