#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dit4k/manifest.hpp"

namespace dit4k::curriculum {

// Whether integer timestep 0 denotes the clean end or the noisy end of the
// diffusion horizon. Scheduler stacks disagree on this, so every stage must
// state its convention explicitly; there is no default.
enum class TimestepConvention { kIndexZeroIsClean, kIndexZeroIsNoise };

const char* convention_name(TimestepConvention convention);
TimestepConvention convention_from_name(const std::string& name);

// One curriculum stage: an inclusive integer timestep band within [0, 999]
// combined with an aesthetic rank filter over the corpus.
struct StageSpec {
    std::string name;
    int band_lo = 0;
    int band_hi = 999;
    TimestepConvention convention = TimestepConvention::kIndexZeroIsNoise;
    double aesthetic_percentile = 100.0;  // top fraction retained, in (0, 100]
    std::int64_t steps = 1;
    void validate() const;
};

struct CurriculumPlan {
    std::vector<StageSpec> stages;
    void validate() const;  // at least one stage, all stages valid
};

// Declarative plan file (JSON, // comments allowed):
// {"stages": [{"name": ..., "band": [lo, hi], "convention": "index_0_is_noise",
//              "percentile": 5.0, "steps": 2000}, ...]}
// Unknown keys are rejected.
CurriculumPlan load_plan(const std::filesystem::path& path);

// Indices of the records the stage retains: the ceil(p% * n) highest ArtiMuse
// scores, ties broken by ascending id. Input order is preserved. Throws if a
// record is missing the score.
std::vector<std::size_t> filter_records(std::span<const ImageMetaRecord> records,
                                        const StageSpec& stage);

// Uniform integer draws over a stage band. Bounded draws use rejection
// sampling on top of mt19937_64 so sequences are identical across platforms
// for a given seed. One sampler per worker; not thread-safe.
class TimestepSampler {
   public:
    explicit TimestepSampler(std::uint64_t seed) : rng_(seed) {}

    int sample(const StageSpec& stage);

   private:
    std::uint64_t next_below(std::uint64_t bound);
    std::mt19937_64 rng_;
};

// Maps an integer scheduler index to the continuous time of the straight
// interpolation path, using grid midpoints: (index + 1/2)/1000 when index 0
// is clean, mirrored otherwise. Result is strictly inside (0, 1).
double normalized_t(int timestep, TimestepConvention convention);

}  // namespace dit4k::curriculum
