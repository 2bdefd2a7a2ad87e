#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "ringform/kernels.hpp"
#include "ringform/topology.hpp"

using namespace ringform;

namespace {

struct Ring {
    std::vector<Vec2> z;
    std::vector<LocalFrame> frames;
    TargetFormation targets;
};

Ring make_ring(std::size_t n) {
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Ring r{{}, {}, TargetFormation::uniform(n, kPi * (static_cast<double>(n) - 2.0) / static_cast<double>(n))};
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = -kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        const double jitter = 0.1 / static_cast<double>(n);
        r.z.push_back({std::cos(ang) + jitter * u(rng), std::sin(ang) + jitter * u(rng)});
        r.frames.push_back({kPi * (u(rng) + 1.0)});
    }
    return r;
}

SquareMatrix laplacian(std::size_t n) {
    const SquareMatrix e = ring_incidence(n);
    return e.transposed() * e;
}

template <double (*Kernel)(std::span<const Vec2>, const TargetFormation&, double, std::span<Vec2>)>
void velocity(benchmark::State& state) {
    const Ring r = make_ring(static_cast<std::size_t>(state.range(0)));
    std::vector<Vec2> v(r.z.size());
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(r.z, r.targets, 0.6, v));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Kernel)(std::span<const Vec2>, std::span<const LocalFrame>, const TargetFormation&, double,
                           std::span<Vec2>)>
void velocity_local(benchmark::State& state) {
    const Ring r = make_ring(static_cast<std::size_t>(state.range(0)));
    std::vector<Vec2> v(r.z.size());
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(r.z, r.frames, r.targets, 0.6, v));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Kernel)(const SquareMatrix&, std::size_t, std::uint64_t)>
void mixed_sign(benchmark::State& state) {
    const SquareMatrix l = laplacian(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(l, 20000, 1));
    state.SetItemsProcessed(state.iterations() * 20000);
}

template <std::size_t (*Kernel)(std::size_t, std::uint64_t)>
void lemma3(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(static_cast<std::size_t>(state.range(0)), 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(velocity<kernels::velocity_field_serial>)->Name("velocity/serial")->RangeMultiplier(8)->Range(8, 32768);
BENCHMARK(velocity<kernels::velocity_field_omp>)->Name("velocity/omp")->RangeMultiplier(8)->Range(8, 32768);
BENCHMARK(velocity_local<kernels::velocity_field_local_serial>)
    ->Name("velocity_local/serial")
    ->RangeMultiplier(8)
    ->Range(8, 32768);
BENCHMARK(velocity_local<kernels::velocity_field_local_omp>)
    ->Name("velocity_local/omp")
    ->RangeMultiplier(8)
    ->Range(8, 32768);
BENCHMARK(mixed_sign<kernels::min_mixed_sign_quadratic_serial>)->Name("mixed_sign/serial")->DenseRange(3, 8, 5);
BENCHMARK(mixed_sign<kernels::min_mixed_sign_quadratic_omp>)->Name("mixed_sign/omp")->DenseRange(3, 8, 5);
BENCHMARK(lemma3<kernels::lemma3_violations_serial>)->Name("lemma3/serial")->Arg(100000);
BENCHMARK(lemma3<kernels::lemma3_violations_omp>)->Name("lemma3/omp")->Arg(100000);

BENCHMARK_MAIN();
