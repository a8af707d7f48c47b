// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "epigraphon/graphon.hpp"
#include "epigraphon/kernels.hpp"
#include "epigraphon/rng.hpp"

namespace {

using namespace epigraphon;

Matrix random_matrix(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n * n; ++k) m.data()[k] = counter_uniform(7, k);
    return m;
}

const kernels::Kernel2D kGaussian = [](double x, double y) {
    return std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)) / 0.5);
};

template <auto Matvec>
void BM_Matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix m = random_matrix(n);
    const Vector x(n, 1.0);
    Vector out(n);
    for (auto _ : state) {
        Matvec(m, x, out, 1.0);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <auto Grid>
void BM_Grid(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Vector xs = midpoints(n);
    for (auto _ : state) benchmark::DoNotOptimize(Grid(kGaussian, xs, xs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <auto Sample>
void BM_Bernoulli(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix probs(n, n, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(Sample(probs, 42));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}

}  // namespace

BENCHMARK(BM_Matvec<kernels::serial::matvec>)->Name("matvec/serial")->Arg(400)->Arg(1600);
BENCHMARK(BM_Matvec<kernels::parallel::matvec>)->Name("matvec/parallel")->Arg(400)->Arg(1600);
BENCHMARK(BM_Grid<kernels::serial::evaluate_grid>)->Name("grid/serial")->Arg(400)->Arg(1600);
BENCHMARK(BM_Grid<kernels::parallel::evaluate_grid>)->Name("grid/parallel")->Arg(400)->Arg(1600);
BENCHMARK(BM_Bernoulli<kernels::serial::bernoulli_adjacency>)->Name("bernoulli/serial")->Arg(400)->Arg(1600);
BENCHMARK(BM_Bernoulli<kernels::parallel::bernoulli_adjacency>)->Name("bernoulli/parallel")->Arg(400)->Arg(1600);

BENCHMARK_MAIN();
