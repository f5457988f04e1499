#include <benchmark/benchmark.h>

#include "texkd/contourlet.hpp"
#include "texkd/statexture.hpp"
#include "texkd/synth.hpp"

namespace {

texkd::FeatureMap input(std::size_t channels, std::size_t side) {
    texkd::synth::SynthSpec spec;
    spec.pattern = texkd::synth::Pattern::Noise;
    spec.dims = {channels, side, side};
    spec.seed = 1;
    return texkd::synth::generate_pattern(spec);
}

void BM_LpDecompose(benchmark::State& state) {
    const auto x = input(16, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(texkd::lp_decompose(x));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.data().size()));
}
BENCHMARK(BM_LpDecompose)->Arg(64)->Arg(128)->Arg(256);

void BM_DfbDecompose(benchmark::State& state) {
    const auto x = input(16, 64);
    const auto m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(texkd::dfb_decompose(x, m));
    }
}
BENCHMARK(BM_DfbDecompose)->DenseRange(1, 4);

void BM_CdmForward(benchmark::State& state) {
    const auto x = input(16, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(texkd::cdm_forward(x));
    }
}
BENCHMARK(BM_CdmForward)->Arg(64)->Arg(128);

void BM_ExtractStatistical(benchmark::State& state) {
    const auto x = input(64, static_cast<std::size_t>(state.range(0)));
    const texkd::StatConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(texkd::extract_statistical(x, cfg));
    }
}
BENCHMARK(BM_ExtractStatistical)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
