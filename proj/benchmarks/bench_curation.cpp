#include <benchmark/benchmark.h>

#include <random>

#include "dit4k/curation.hpp"
#include "dit4k/image.hpp"

namespace {

using namespace dit4k;

GrayImage noise_image(int w, int h, std::uint64_t seed) {
    GrayImage img(w, h);
    std::mt19937_64 rng(seed);
    for (auto& p : img.pixels) {
        p = static_cast<std::uint8_t>(rng());
    }
    return img;
}

void BM_FlatnessFilter(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const GrayImage img = noise_image(side, side, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(curation::flatness_filter(img));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(img.pixels.size()));
}
BENCHMARK(BM_FlatnessFilter)->Arg(960)->Arg(1920)->Arg(3840)->Unit(benchmark::kMillisecond);

void BM_EntropyFilter(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const GrayImage img = noise_image(side, side, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(curation::entropy_filter(img));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(img.pixels.size()));
}
BENCHMARK(BM_EntropyFilter)->Arg(1920)->Arg(3840)->Unit(benchmark::kMillisecond);

void BM_BucketAssign(benchmark::State& state) {
    const curation::BucketSet set = curation::BucketSet::default_set();
    std::mt19937_64 rng(3);
    std::vector<std::pair<int, int>> dims;
    for (int i = 0; i < 1024; ++i) {
        dims.emplace_back(512 + static_cast<int>(rng() % 7681),
                          512 + static_cast<int>(rng() % 7681));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [w, h] = dims[i++ & 1023];
        benchmark::DoNotOptimize(curation::bucket_assign(w, h, set));
    }
}
BENCHMARK(BM_BucketAssign);

}  // namespace

BENCHMARK_MAIN();
