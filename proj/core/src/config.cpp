#include "dit4k/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dit4k::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
    throw std::runtime_error("config: " + where + ": " + message);
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (allowed.find(key) == allowed.end()) {
            fail(where + "." + key, "unknown key");
        }
    }
}

double require_number(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        fail(where + "." + key, "required key is missing (no default)");
    }
    if (!it->is_number()) {
        fail(where + "." + key, "expected a number");
    }
    return it->get<double>();
}

rope::AxisSpec parse_axis(const json& j, rope::Axis axis, const std::string& where) {
    reject_unknown_keys(j, {"channel_size", "train_len", "infer_len"}, where);
    rope::AxisSpec spec;
    spec.axis = axis;
    spec.channel_size = j.value("channel_size", 64);
    spec.train_len = j.value("train_len", 64);
    spec.infer_len = j.value("infer_len", spec.train_len);
    try {
        spec.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return spec;
}

RopeSection parse_rope(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"base", "ntk_factor", "height", "width", "ramp_low", "ramp_high"},
                        where);
    RopeSection section;
    section.base.base = j.value("base", 10000.0);
    section.base.ntk_factor = j.value("ntk_factor", 1.0);
    try {
        section.base.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    if (j.contains("height")) {
        section.height = parse_axis(j.at("height"), rope::Axis::kHeight, where + ".height");
    }
    if (j.contains("width")) {
        section.width = parse_axis(j.at("width"), rope::Axis::kWidth, where + ".width");
    }
    if (j.contains("ramp_low") != j.contains("ramp_high")) {
        fail(where, "ramp_low and ramp_high must be given together");
    }
    if (j.contains("ramp_low")) {
        rope::YarnRampConfig ramp;
        ramp.ramp_low = j.at("ramp_low").get<double>();
        ramp.ramp_high = j.at("ramp_high").get<double>();
        try {
            ramp.validate();
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
        section.ramp = ramp;
    }
    return section;
}

ObjectiveSection parse_objective(const json& j, const std::string& where) {
    reject_unknown_keys(j,
                        {"snr_clip", "snr_exponent", "huber_c_min", "huber_c_max",
                         "huber_exponent", "vae_weights"},
                        where);
    ObjectiveSection section;
    section.min_snr.snr_clip = require_number(j, "snr_clip", where);
    section.min_snr.snr_exponent = require_number(j, "snr_exponent", where);
    section.huber.c_min = j.value("huber_c_min", 0.2);
    section.huber.c_max = j.value("huber_c_max", 1.0);
    section.huber.exponent = j.value("huber_exponent", 1.0);
    if (j.contains("vae_weights")) {
        const json& w = j.at("vae_weights");
        reject_unknown_keys(w, {"wavelet", "perceptual", "l2"}, where + ".vae_weights");
        section.vae_weights.wavelet = w.value("wavelet", 0.2);
        section.vae_weights.perceptual = w.value("perceptual", 0.1);
        section.vae_weights.l2 = w.value("l2", 1.0);
    }
    try {
        section.min_snr.validate();
        section.huber.validate();
        section.vae_weights.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return section;
}

curriculum::CurriculumPlan parse_curriculum(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"stages"}, where);
    if (!j.contains("stages") || !j.at("stages").is_array()) {
        fail(where + ".stages", "required array is missing");
    }
    curriculum::CurriculumPlan plan;
    std::size_t index = 0;
    for (const json& js : j.at("stages")) {
        const std::string stage_where = where + ".stages[" + std::to_string(index) + "]";
        reject_unknown_keys(js, {"name", "band", "convention", "percentile", "steps"},
                            stage_where);
        curriculum::StageSpec stage;
        if (!js.contains("name")) {
            fail(stage_where + ".name", "required key is missing");
        }
        stage.name = js.at("name").get<std::string>();
        if (!js.contains("band") || !js.at("band").is_array() || js.at("band").size() != 2) {
            fail(stage_where + ".band", "expected [lo, hi]");
        }
        stage.band_lo = js.at("band")[0].get<int>();
        stage.band_hi = js.at("band")[1].get<int>();
        if (!js.contains("convention")) {
            fail(stage_where + ".convention",
                 "required key is missing (index_0_is_clean or index_0_is_noise)");
        }
        try {
            stage.convention =
                curriculum::convention_from_name(js.at("convention").get<std::string>());
        } catch (const std::exception& e) {
            fail(stage_where + ".convention", e.what());
        }
        stage.aesthetic_percentile = js.value("percentile", 100.0);
        if (!js.contains("steps")) {
            fail(stage_where + ".steps", "required key is missing");
        }
        stage.steps = js.at("steps").get<std::int64_t>();
        try {
            stage.validate();
        } catch (const std::exception& e) {
            fail(stage_where, e.what());
        }
        plan.stages.push_back(std::move(stage));
        ++index;
    }
    try {
        plan.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return plan;
}

curation::PipelineConfig parse_curation(const json& j, const std::string& where) {
    reject_unknown_keys(j,
                        {"min_pixels", "flat_patch", "flat_score_threshold",
                         "flat_max_flagged_ratio", "entropy_min_bits", "qalign_min",
                         "artimuse_percentile", "buckets", "image_root", "stages"},
                        where);
    curation::PipelineConfig cfg;
    cfg.min_pixels = j.value("min_pixels", curation::kMinPixels4K);
    cfg.flatness.patch = j.value("flat_patch", 240);
    cfg.flatness.score_threshold = j.value("flat_score_threshold", 800.0);
    cfg.flatness.max_flagged_ratio = j.value("flat_max_flagged_ratio", 0.5);
    cfg.entropy_min_bits = j.value("entropy_min_bits", 7.0);
    cfg.qalign_min = j.value("qalign_min", 4.0);
    cfg.artimuse_percentile = j.value("artimuse_percentile", 30.0);
    cfg.image_root = j.value("image_root", std::string("."));

    if (cfg.min_pixels < 1) {
        fail(where + ".min_pixels", "must be >= 1");
    }
    if (cfg.flatness.patch < 1) {
        fail(where + ".flat_patch", "must be >= 1");
    }
    if (!(cfg.artimuse_percentile > 0.0 && cfg.artimuse_percentile <= 100.0)) {
        fail(where + ".artimuse_percentile", "must be in (0, 100]");
    }

    if (j.contains("buckets")) {
        curation::BucketSet set;
        for (const json& jb : j.at("buckets")) {
            if (!jb.is_array() || jb.size() != 2) {
                fail(where + ".buckets", "each bucket must be [width, height]");
            }
            set.buckets.push_back({jb[0].get<int>(), jb[1].get<int>()});
        }
        try {
            set.validate();
        } catch (const std::exception& e) {
            fail(where + ".buckets", e.what());
        }
        cfg.buckets = std::move(set);
    }

    if (j.contains("stages")) {
        const json& s = j.at("stages");
        reject_unknown_keys(s,
                            {"resolution", "flatness", "entropy", "q_align", "artimuse",
                             "dedup", "character", "bucket"},
                            where + ".stages");
        cfg.enable_resolution = s.value("resolution", true);
        cfg.enable_flatness = s.value("flatness", true);
        cfg.enable_entropy = s.value("entropy", true);
        cfg.enable_qalign = s.value("q_align", true);
        cfg.enable_artimuse = s.value("artimuse", true);
        cfg.enable_dedup = s.value("dedup", true);
        cfg.enable_character = s.value("character", true);
        cfg.enable_bucket = s.value("bucket", true);
    }
    return cfg;
}

}  // namespace

ToolConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const std::exception& e) {
        throw std::runtime_error("config: " + origin + ": " + e.what());
    }
    if (!j.is_object()) {
        fail(origin, "top level must be an object");
    }
    reject_unknown_keys(j, {"global", "rope", "objective", "curriculum", "curation"}, origin);

    ToolConfig cfg;
    if (j.contains("global")) {
        const json& g = j.at("global");
        reject_unknown_keys(g, {"workers", "seed", "output_dir", "log_level"},
                            origin + ".global");
        cfg.global.workers = g.value("workers", 1);
        cfg.global.seed = g.value("seed", std::uint64_t{0});
        cfg.global.output_dir = g.value("output_dir", std::string("."));
        cfg.global.log_level = g.value("log_level", std::string("info"));
        if (cfg.global.workers < 1) {
            fail(origin + ".global.workers", "must be >= 1");
        }
    }
    if (j.contains("rope")) {
        cfg.rope = parse_rope(j.at("rope"), origin + ".rope");
    }
    if (j.contains("objective")) {
        cfg.objective = parse_objective(j.at("objective"), origin + ".objective");
    }
    if (j.contains("curriculum")) {
        cfg.curriculum = parse_curriculum(j.at("curriculum"), origin + ".curriculum");
    }
    if (j.contains("curation")) {
        cfg.curation = parse_curation(j.at("curation"), origin + ".curation");
    }
    return cfg;
}

ToolConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text, path.string());
}

std::string default_config_text() {
    return R"({
  // Reference configuration. Every value shown is the built-in default except
  // where marked REQUIRED; those have no default and must be chosen per run.
  "global": {
    "workers": 1,          // worker threads for the curation pipeline
    "seed": 0,             // RNG seed for sampling subcommands
    "output_dir": ".",     // all outputs land under this directory
    "log_level": "info"
  },
  "rope": {
    "base": 10000.0,       // rotary base, > 1
    "ntk_factor": 1.0,     // multiplies the base, >= 1
    "height": { "channel_size": 64, "train_len": 64, "infer_len": 64 },
    "width":  { "channel_size": 64, "train_len": 64, "infer_len": 64 },
    // Band ramp on integer cycle counts, 0 <= ramp_low < ramp_high. No stock
    // value ships with the tool; pick the band split for your window.
    "ramp_low": 2.0,
    "ramp_high": 9.0
  },
  "objective": {
    "snr_clip": 5.0,       // REQUIRED: min-SNR clip, > 0
    "snr_exponent": 1.0,   // REQUIRED: min-SNR exponent, >= 0
    "huber_c_min": 0.2,    // threshold floor at low SNR
    "huber_c_max": 1.0,    // threshold ceiling at high SNR
    "huber_exponent": 1.0, // schedule shape in [0, 1]
    "vae_weights": { "wavelet": 0.2, "perceptual": 0.1, "l2": 1.0 }
  },
  "curriculum": {
    "stages": [
      // convention is mandatory: it states whether index 0 is the clean or the
      // noisy end of the 0..999 horizon.
      { "name": "stage1", "band": [0, 999], "convention": "index_0_is_noise",
        "percentile": 100.0, "steps": 30000 },
      { "name": "stage2", "band": [0, 459], "convention": "index_0_is_noise",
        "percentile": 5.0, "steps": 2000 }
    ]
  },
  "curation": {
    "min_pixels": 8294400,          // resolution gate: 3840*2160 total pixels
    "flat_patch": 240,              // flatness tile edge, full tiles only
    "flat_score_threshold": 800.0,  // patch gradient-variance floor
    "flat_max_flagged_ratio": 0.5,  // fail when flagged/total exceeds this
    "entropy_min_bits": 7.0,        // fail when histogram entropy is below
    "qalign_min": 4.0,              // keep strictly greater scores
    "artimuse_percentile": 30.0,    // corpus-level top fraction kept
    "image_root": ".",              // base directory for record paths
    "stages": { "resolution": true, "flatness": true, "entropy": true,
                "q_align": true, "artimuse": true, "dedup": true,
                "character": true, "bucket": true },
    "buckets": [
      [5440, 3072], [5184, 3264], [4992, 3328], [4736, 3520], [5824, 2880],
      [6272, 2688], [5568, 3008], [6336, 2624], [5632, 3008], [4608, 3648],
      [3072, 5440], [3648, 4608], [3520, 4736], [3328, 4992],
      [4096, 4096]
    ]
  }
}
)";
}

}  // namespace dit4k::config
