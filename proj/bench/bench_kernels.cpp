// Serial reference vs OpenMP kernels on the same inputs.

#include "nikodym/constructions.hpp"
#include "nikodym/verify.hpp"

#include <benchmark/benchmark.h>

using namespace nikodym;

namespace {

PointSet dense_set(std::uint64_t p, unsigned m, unsigned d)
{
    auto g = Geometry::make(build_field(p, m), d);
    return sample_bernoulli(g, 1, 2, quantize_probability(0.97));
}

// args: p, m, d
void args(benchmark::internal::Benchmark* b)
{
    b->Args({11, 1, 3})->Args({19, 1, 3})->Args({3, 3, 3})->Args({5, 2, 2})->Unit(benchmark::kMillisecond);
}

template <bool Parallel>
void BM_Nikodym(benchmark::State& state)
{
    const auto s = dense_set(state.range(0), static_cast<unsigned>(state.range(1)), static_cast<unsigned>(state.range(2)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? nikodym_check(s, true) : nikodym_check_serial(s, true));
    state.counters["points"] = static_cast<double>(s.geom().num_points());
}

template <bool Parallel>
void BM_Kakeya(benchmark::State& state)
{
    const auto s = dense_set(state.range(0), static_cast<unsigned>(state.range(1)), static_cast<unsigned>(state.range(2)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kakeya_check(s) : kakeya_check_serial(s));
}

} // namespace

BENCHMARK(BM_Nikodym<false>)->Name("nikodym_check/serial")->Apply(args);
BENCHMARK(BM_Nikodym<true>)->Name("nikodym_check/openmp")->Apply(args);
BENCHMARK(BM_Kakeya<false>)->Name("kakeya_check/serial")->Apply(args);
BENCHMARK(BM_Kakeya<true>)->Name("kakeya_check/openmp")->Apply(args);

BENCHMARK_MAIN();
