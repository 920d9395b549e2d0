#include <benchmark/benchmark.h>

#include <random>

#include "fxpf/beamform.hpp"
#include "fxpf/config.hpp"
#include "fxpf/pipeline.hpp"
#include "fxpf/prediction.hpp"
#include "fxpf/spectrum.hpp"

namespace {

using namespace fxpf;

void BM_EstimateFilter(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<cplx> s(n);
    for (auto& v : s) v = {g(rng), g(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(filter_bin(s, p, 0.01));
}
BENCHMARK(BM_EstimateFilter)->Args({13, 1})->Args({64, 2})->Args({128, 4});

void BM_ForwardInverse(benchmark::State& state) {
    Array2D<double> slice(128, 8);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (double& v : slice.values()) v = g(rng);
    for (auto _ : state) benchmark::DoNotOptimize(inverse_spectrum(forward_spectrum(slice, 0)));
}
BENCHMARK(BM_ForwardInverse);

// One delay-aligned beamline of the default experiment.
struct Beamline {
    ChannelFrame aligned;
    Array2D<double> mask;
};

const Beamline& center_beamline() {
    static const Beamline b = [] {
        PipelineConfig cfg = default_config();
        cfg.phantom.density_per_mm2 = 2.0;
        const ChannelFrame raw = simulate_frame(cfg);
        const BeamGrid grid = make_grid(cfg);
        return Beamline{align_channels(raw, 0.0, grid).frame,
                        apodization_map(0.0, grid, cfg.geometry, cfg.beamform.f_number, cfg.beamform.window)};
    }();
    return b;
}

void BM_FilterFrame(benchmark::State& state) {
    const Beamline& b = center_beamline();
    const PipelineConfig cfg = default_config();
    const FxpfVariant variant = state.range(0) == 0 ? FxpfVariant::adaptive() : FxpfVariant::fixed(state.range(0));
    const FxpfConfig fx = *make_fxpf_config(cfg, variant);
    for (auto _ : state) benchmark::DoNotOptimize(fxpf_filter_frame(b.aligned, b.mask, fx));
    state.SetLabel(variant.to_string());
}
BENCHMARK(BM_FilterFrame)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BeamformImage(benchmark::State& state) {
    PipelineConfig cfg = default_config();
    cfg.phantom.density_per_mm2 = 2.0;
    static const ChannelFrame raw = simulate_frame(cfg);
    const FxpfVariant variant = state.range(0) ? FxpfVariant::adaptive() : FxpfVariant::off();
    for (auto _ : state) benchmark::DoNotOptimize(beamform_variant(raw, cfg, variant));
    state.SetLabel(variant.to_string());
}
BENCHMARK(BM_BeamformImage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
