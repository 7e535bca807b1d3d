#include <benchmark/benchmark.h>

#include <random>

#include "bldcsim/mlp.hpp"

using namespace bldcsim;

namespace {

std::vector<LayerSpec> deep_topology() {
    std::vector<LayerSpec> t{{3, Activation::identity}};
    for (int i = 0; i < 14; ++i) {
        t.push_back({5, Activation::sigmoid});
    }
    t.push_back({3, Activation::identity});
    return t;
}

void BM_Forward(benchmark::State& state) {
    const Mlp mlp = make_mlp(deep_topology(), 7);
    const std::vector<double> x{0.3, 0.6, 0.9};
    for (auto _ : state) {
        ForwardResult r = forward(mlp, x);
        benchmark::DoNotOptimize(r.activations.back().data());
    }
}
BENCHMARK(BM_Forward);

void BM_ForwardBackward(benchmark::State& state) {
    const Mlp mlp = make_mlp(deep_topology(), 7);
    Gradients grads = zero_gradients(mlp);
    const std::vector<double> x{0.3, 0.6, 0.9};
    const std::vector<double> t{0.1, 0.5, 0.9};
    for (auto _ : state) {
        const ForwardResult r = forward(mlp, x);
        accumulate_backward(mlp, r, t, Loss::mse, grads);
        benchmark::DoNotOptimize(grads.d_weights.data());
    }
}
BENCHMARK(BM_ForwardBackward);

}  // namespace
