#include <benchmark/benchmark.h>

#include <random>

#include "dit4k/objective.hpp"
#include "dit4k/rope.hpp"
#include "dit4k/wavelet.hpp"

namespace {

using namespace dit4k;

Tensor3 random_tensor(int c, int h, int w, std::uint64_t seed) {
    Tensor3 t(c, h, w);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : t.data) {
        v = gauss(rng);
    }
    return t;
}

void BM_DwtForward(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const Tensor3 x = random_tensor(16, side, side, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wavelet::dwt_forward(x));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_DwtForward)->Arg(64)->Arg(128)->Arg(256);

void BM_DwtRoundTrip(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const Tensor3 x = random_tensor(16, side, side, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wavelet::dwt_inverse(wavelet::dwt_forward(x)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_DwtRoundTrip)->Arg(64)->Arg(128);

void BM_SnrHwLoss(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    objective::FlowSample sample{random_tensor(16, side, side, 3),
                                 random_tensor(16, side, side, 4), 0.37};
    const Tensor3 v_pred = random_tensor(16, side, side, 5);
    const objective::MinSnrConfig min_snr{5.0, 1.0};
    const objective::HuberSchedule schedule{0.2, 1.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(objective::snr_hw_loss(sample, v_pred, min_snr, schedule));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v_pred.size()));
}
BENCHMARK(BM_SnrHwLoss)->Arg(32)->Arg(64)->Arg(128);

void BM_SpectrumPipeline(benchmark::State& state) {
    const rope::AxisSpec axis{rope::Axis::kHeight, 128, 64, 128};
    const rope::RopeBaseConfig base{10000.0, 1.0};
    const rope::YarnRampConfig ramp{2.0, 9.0};
    for (auto _ : state) {
        const auto baseline = rope::base_frequencies(axis, base);
        const auto resonant = rope::snap_to_resonance(baseline, axis.train_len);
        benchmark::DoNotOptimize(rope::apply_yarn(resonant, axis, ramp));
    }
}
BENCHMARK(BM_SpectrumPipeline);

void BM_PhaseDriftMap(benchmark::State& state) {
    const rope::AxisSpec axis{rope::Axis::kHeight, 128, 64, 64};
    const auto baseline = rope::base_frequencies(axis, rope::RopeBaseConfig{10000.0, 1.0});
    const auto resonant = rope::snap_to_resonance(baseline, axis.train_len);
    std::vector<double> positions;
    for (int p = 0; p <= 128; ++p) {
        positions.push_back(p);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(rope::phase_drift_map(baseline, resonant, positions));
    }
}
BENCHMARK(BM_PhaseDriftMap);

}  // namespace

BENCHMARK_MAIN();
