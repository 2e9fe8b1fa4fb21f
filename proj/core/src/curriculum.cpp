#include "dit4k/curriculum.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dit4k::curriculum {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

constexpr int kHorizon = 1000;  // integer timesteps 0..999

}  // namespace

const char* convention_name(TimestepConvention convention) {
    return convention == TimestepConvention::kIndexZeroIsClean ? "index_0_is_clean"
                                                               : "index_0_is_noise";
}

TimestepConvention convention_from_name(const std::string& name) {
    if (name == "index_0_is_clean") {
        return TimestepConvention::kIndexZeroIsClean;
    }
    if (name == "index_0_is_noise") {
        return TimestepConvention::kIndexZeroIsNoise;
    }
    throw std::invalid_argument(
        "unknown timestep convention '" + name +
        "' (expected 'index_0_is_clean' or 'index_0_is_noise')");
}

void StageSpec::validate() const {
    require(!name.empty(), "StageSpec: name must be nonempty");
    require(band_lo >= 0 && band_hi < kHorizon && band_lo <= band_hi,
            "StageSpec '" + name + "': band must be a nonempty range within [0, 999]");
    require(aesthetic_percentile > 0.0 && aesthetic_percentile <= 100.0,
            "StageSpec '" + name + "': percentile must be in (0, 100]");
    require(steps > 0, "StageSpec '" + name + "': steps must be positive");
}

void CurriculumPlan::validate() const {
    require(!stages.empty(), "CurriculumPlan: at least one stage required");
    for (const StageSpec& s : stages) {
        s.validate();
    }
}

CurriculumPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open plan file: " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/true,
                                  /*ignore_comments=*/true);
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }

    const std::set<std::string> stage_keys = {"name", "band", "convention", "percentile",
                                              "steps"};
    for (const auto& [key, value] : j.items()) {
        require(key == "stages", "plan: unknown top-level key '" + key + "'");
    }
    require(j.contains("stages") && j["stages"].is_array(),
            "plan: missing 'stages' array");

    CurriculumPlan plan;
    std::size_t index = 0;
    for (const auto& js : j["stages"]) {
        const std::string where = "plan: stages[" + std::to_string(index) + "]";
        require(js.is_object(), where + " must be an object");
        for (const auto& [key, value] : js.items()) {
            require(stage_keys.count(key) > 0, where + ": unknown key '" + key + "'");
        }
        for (const char* key : {"name", "band", "convention", "steps"}) {
            require(js.contains(key), where + ": missing required key '" + key + "'");
        }
        StageSpec s;
        s.name = js.at("name").get<std::string>();
        const auto& band = js.at("band");
        require(band.is_array() && band.size() == 2, where + ": band must be [lo, hi]");
        s.band_lo = band[0].get<int>();
        s.band_hi = band[1].get<int>();
        s.convention = convention_from_name(js.at("convention").get<std::string>());
        s.aesthetic_percentile = js.value("percentile", 100.0);
        s.steps = js.at("steps").get<std::int64_t>();
        s.validate();
        plan.stages.push_back(std::move(s));
        ++index;
    }
    plan.validate();
    return plan;
}

std::vector<std::size_t> filter_records(std::span<const ImageMetaRecord> records,
                                        const StageSpec& stage) {
    stage.validate();
    return rank_top_by_artimuse(records, stage.aesthetic_percentile);
}

std::uint64_t TimestepSampler::next_below(std::uint64_t bound) {
    // Unbiased bounded draw: reject values in the wrap-around remainder.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    std::uint64_t draw = rng_();
    while (draw > limit) {
        draw = rng_();
    }
    return draw % bound;
}

int TimestepSampler::sample(const StageSpec& stage) {
    stage.validate();
    const auto span = static_cast<std::uint64_t>(stage.band_hi - stage.band_lo) + 1;
    return stage.band_lo + static_cast<int>(next_below(span));
}

double normalized_t(int timestep, TimestepConvention convention) {
    if (timestep < 0 || timestep >= kHorizon) {
        throw std::invalid_argument("normalized_t: timestep must be in [0, 999]");
    }
    const double forward = (timestep + 0.5) / kHorizon;
    return convention == TimestepConvention::kIndexZeroIsClean ? forward : 1.0 - forward;
}

}  // namespace dit4k::curriculum
