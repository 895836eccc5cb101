// Serial references against the OpenMP kernels on (C^N)^{⊗k}.
// Args: N, k.

#include <array>
#include <vector>

#include <benchmark/benchmark.h>

#include "ellqdet/kernels.hpp"
#include "ellqdet/permutations.hpp"
#include "ellqdet/qdet.hpp"
#include "ellqdet/sampling.hpp"

namespace {

using ellqdet::kernels::Matrix;
namespace kernels = ellqdet::kernels;

Matrix random_square(long d)
{
    std::srand(7);
    return Matrix::Random(d, d);
}

template <bool Parallel>
void bm_embed(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Matrix op = random_square(n * n);
    const std::array<int, 2> slots{k, 1};
    for (auto _ : state) {
        Matrix m = Parallel ? kernels::embed(op, n, slots, k) : kernels::serial::embed(op, n, slots, k);
        benchmark::DoNotOptimize(m.data());
    }
}

template <bool Parallel>
void bm_apply(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Matrix op = random_square(n * n);
    const std::array<int, 2> slots{1, k};
    const Matrix states0 = random_square(kernels::ipow(n, k));
    for (auto _ : state) {
        state.PauseTiming();
        Matrix states = states0;
        state.ResumeTiming();
        if (Parallel) {
            kernels::apply_on_slots(op, n, slots, k, states);
        } else {
            kernels::serial::apply_on_slots(op, n, slots, k, states);
        }
        benchmark::DoNotOptimize(states.data());
    }
}

template <bool Parallel>
void bm_partial_trace(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Matrix m = random_square(kernels::ipow(n, k));
    std::vector<int> traced(k - 1);
    for (int s = 0; s < k - 1; ++s) traced[s] = s + 1;
    for (auto _ : state) {
        Matrix t = Parallel ? kernels::partial_trace(m, n, k, traced) : kernels::serial::partial_trace(m, n, k, traced);
        benchmark::DoNotOptimize(t.data());
    }
}

template <bool Parallel>
void bm_compensated_sum(benchmark::State& state)
{
    const int terms = static_cast<int>(state.range(0));
    std::vector<Matrix> parts;
    for (int i = 0; i < terms; ++i) parts.push_back(random_square(state.range(1)));
    for (auto _ : state) {
        Matrix s = Parallel ? kernels::compensated_sum(parts) : kernels::serial::compensated_sum(parts);
        benchmark::DoNotOptimize(s.data());
    }
}

void bm_qdet_product(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    ellqdet::Sampler s(1);
    const auto params = s.params(n);
    const auto z = s.spectral();
    for (auto _ : state) benchmark::DoNotOptimize(ellqdet::qdet_product(params, z).consistency);
}

void shapes(benchmark::internal::Benchmark* b)
{
    b->Args({2, 8})->Args({3, 5})->Args({4, 4})->Args({5, 3})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(bm_embed<false>)->Apply(shapes);
BENCHMARK(bm_embed<true>)->Apply(shapes);
BENCHMARK(bm_apply<false>)->Apply(shapes);
BENCHMARK(bm_apply<true>)->Apply(shapes);
BENCHMARK(bm_partial_trace<false>)->Apply(shapes);
BENCHMARK(bm_partial_trace<true>)->Apply(shapes);
BENCHMARK(bm_compensated_sum<false>)->Args({120, 5})->Args({720, 6})->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_compensated_sum<true>)->Args({120, 5})->Args({720, 6})->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_qdet_product)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
