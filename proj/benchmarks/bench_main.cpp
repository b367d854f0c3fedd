#include <benchmark/benchmark.h>

#include "qks/conic.hpp"
#include "qks/data.hpp"
#include "qks/qkernel.hpp"
#include "qks/sampler.hpp"
#include "qks/svm.hpp"

using namespace qks;

static void BM_KernelMatrix(benchmark::State& state) {
    const Eigen::Index m = state.range(0);
    const LabeledDataset ds = gen_circles(m, 0.05, 0.5, 1);
    EmbeddingSpec spec;
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel_matrix_exact(spec, ds.X));
    state.SetComplexityN(m);
}
BENCHMARK(BM_KernelMatrix)->Arg(20)->Arg(40)->Arg(80)->Complexity();

static void BM_SamplerDraws(benchmark::State& state) {
    const std::int64_t N = state.range(0);
    const ShotPlan plan{CircuitKind::GATES, N};
    SplitMix64 rng(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(draw_kernel(0.37, plan, rng));
}
BENCHMARK(BM_SamplerDraws)->Arg(16)->Arg(1024)->Arg(1 << 20);

static void BM_SampledMatrix(benchmark::State& state) {
    const Eigen::Index m = state.range(0);
    const LabeledDataset ds = gen_circles(m, 0.05, 0.5, 3);
    const Eigen::MatrixXd K = kernel_matrix_exact(EmbeddingSpec{}, ds.X);
    const ShotPlan plan{CircuitKind::GATES, 415};
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(draw_kernel_matrix_sym(K, plan, ++seed));
}
BENCHMARK(BM_SampledMatrix)->Arg(40)->Arg(100);

static void BM_SvmTrain(benchmark::State& state) {
    const Eigen::Index m = state.range(0);
    const LabeledDataset ds = gen_circles(m, 0.05, 0.5, 4);
    const Eigen::MatrixXd K = kernel_matrix_exact(EmbeddingSpec{}, ds.X);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_primal(K, ds.y, 1000.0));
}
BENCHMARK(BM_SvmTrain)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
