#include <benchmark/benchmark.h>

#include <random>

#include "vitmem/augment.hpp"
#include "vitmem/metrics.hpp"
#include "vitmem/ops.hpp"
#include "vitmem/vit.hpp"

using namespace vitmem;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng) {
    Tensor t(std::move(shape));
    std::normal_distribution<double> dist;
    for (double& v : t.data) v = dist(rng);
    return t;
}

void BM_Matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    Tensor a = random_tensor({n, n}, rng);
    Tensor b = random_tensor({n, n}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ops::matmul(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_TinyForward(benchmark::State& state) {
    std::mt19937_64 rng(2);
    vit::Parameters p = vit::init_parameters(vit::ModelConfig::tiny(), 3);
    Tensor img({8, 8, 3});
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& v : img.data) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(vit::forward(p, {img}));
}
BENCHMARK(BM_TinyForward);

void BM_TinyLossAndGradients(benchmark::State& state) {
    std::mt19937_64 rng(4);
    vit::Parameters p = vit::init_parameters(vit::ModelConfig::tiny(), 5);
    std::vector<Tensor> images;
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 4; ++i) {
        Tensor img({8, 8, 3});
        for (double& v : img.data) v = u(rng);
        images.push_back(img);
    }
    Tensor targets({4}, {0.2, 0.4, 0.6, 0.8});
    for (auto _ : state) benchmark::DoNotOptimize(vit::loss_and_gradients(p, images, targets));
}
BENCHMARK(BM_TinyLossAndGradients);

void BM_AugmentPipeline(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(6);
    ImageBuffer img(side, side);
    std::uniform_real_distribution<double> u(0, 1);
    for (double& v : img.pixels) v = u(rng);
    const augment::AugmentSpec spec = augment::AugmentSpec::defaults(7);
    std::uint64_t sample = 0;
    for (auto _ : state) benchmark::DoNotOptimize(augment::apply_pipeline(img, spec, sample++, 0));
}
BENCHMARK(BM_AugmentPipeline)->Arg(32)->Arg(64)->Arg(256);

void BM_Spearman(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(metrics::spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
