#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dit4k/curation.hpp"
#include "dit4k/curriculum.hpp"
#include "dit4k/objective.hpp"
#include "dit4k/rope.hpp"

namespace dit4k::config {

struct GlobalConfig {
    int workers = 1;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string log_level = "info";
};

struct RopeSection {
    rope::RopeBaseConfig base;
    rope::AxisSpec height{rope::Axis::kHeight, 64, 64, 64};
    rope::AxisSpec width{rope::Axis::kWidth, 64, 64, 64};
    std::optional<rope::YarnRampConfig> ramp;  // required before apply_yarn is used
};

struct ObjectiveSection {
    // snr_clip and snr_exponent have no defaults anywhere in this tool; a
    // config that contains an "objective" section must state them.
    objective::MinSnrConfig min_snr;
    objective::HuberSchedule huber;
    objective::VaeLossWeights vae_weights;
};

// Whole-tool configuration. Sections are optional; when present they are
// fully validated and unknown keys are rejected with their JSON location.
struct ToolConfig {
    GlobalConfig global;
    std::optional<RopeSection> rope;
    std::optional<ObjectiveSection> objective;
    std::optional<curriculum::CurriculumPlan> curriculum;
    std::optional<curation::PipelineConfig> curation;
};

// Parses a JSON config ("//" comments allowed). Throws std::runtime_error with
// the offending key path and the violated constraint.
ToolConfig load_config(const std::filesystem::path& path);
ToolConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Reference config with every tunable present, default values filled in and a
// comment describing each. Parses with load_config unchanged.
std::string default_config_text();

}  // namespace dit4k::config
