#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "dit4k/image.hpp"
#include "dit4k/rope.hpp"

namespace dit4k::tools {

namespace {

using namespace dit4k::rope;

struct RopeDiagnoseOptions {
    int height_dim = 64;
    int width_dim = 64;
    double base = 10000.0;
    double ntk = 1.0;
    int train_height = 64;
    int train_width = 64;
    int infer_height = 0;  // 0: same as train
    int infer_width = 0;
    double ramp_low = -1.0;  // negative: not set
    double ramp_high = -1.0;
    std::string output_dir = ".";
    std::string pattern_out;
    int pattern_band_h = 0;
    int pattern_band_w = 0;
    std::string pattern_variant = "resonant";
};

void write_band_table(const std::filesystem::path& path, const RotarySpectrum& baseline,
                      const RotarySpectrum& resonant, const RotarySpectrum& yarn,
                      const YarnRampConfig& ramp) {
    CsvWriter csv(path);
    for (const char* column :
         {"k", "omega", "cycles", "cycles_snapped", "omega_snapped", "gamma", "omega_yarn"}) {
        csv.cell(std::string(column));
    }
    csv.end_row();
    for (int k = 0; k < baseline.band_count(); ++k) {
        csv.cell(static_cast<std::int64_t>(k));
        csv.cell(baseline.omega[k]);
        csv.cell(baseline.cycles[k]);
        csv.cell(resonant.cycles_snapped[k]);
        csv.cell(resonant.omega[k]);
        csv.cell(yarn_ramp(static_cast<double>(resonant.cycles_snapped[k]), ramp));
        csv.cell(yarn.omega[k]);
        csv.end_row();
    }
}

void write_drift_matrix(const std::filesystem::path& path, const PhaseDriftMap& map) {
    CsvWriter csv(path);
    csv.cell(std::string("band"));
    for (double p : map.positions) {
        csv.cell("p_" + format_double(p));
    }
    csv.end_row();
    for (int band = 0; band < map.band_count; ++band) {
        csv.cell(static_cast<std::int64_t>(band));
        for (std::size_t i = 0; i < map.positions.size(); ++i) {
            csv.cell(map.at(band, i));
        }
        csv.end_row();
    }
}

void run(const RopeDiagnoseOptions& opt, ToolContext& ctx) {
    RopeBaseConfig base_cfg{opt.base, opt.ntk};
    YarnRampConfig ramp{opt.ramp_low, opt.ramp_high};
    if (opt.ramp_low < 0.0 && opt.ramp_high < 0.0) {
        const auto& cfg = ctx.config();
        if (cfg.rope.has_value() && cfg.rope->ramp.has_value()) {
            ramp = *cfg.rope->ramp;
        } else {
            throw std::runtime_error(
                "rope-diagnose: --ramp-low/--ramp-high are required (no stock values ship "
                "with the tool; supply them or a config with rope.ramp_low/ramp_high)");
        }
    }
    ramp.validate();

    const auto out_dir = ensure_output_dir(opt.output_dir);

    struct AxisSetup {
        const char* name;
        AxisSpec spec;
    };
    const AxisSetup axes[2] = {
        {"height",
         {Axis::kHeight, opt.height_dim, opt.train_height,
          opt.infer_height > 0 ? opt.infer_height : opt.train_height}},
        {"width",
         {Axis::kWidth, opt.width_dim, opt.train_width,
          opt.infer_width > 0 ? opt.infer_width : opt.train_width}},
    };

    std::vector<RotarySpectrum> chosen_for_pattern;
    for (const AxisSetup& axis : axes) {
        const RotarySpectrum baseline = base_frequencies(axis.spec, base_cfg);
        const RotarySpectrum resonant = snap_to_resonance(baseline, axis.spec.train_len);
        const RotarySpectrum yarn = apply_yarn(resonant, axis.spec, ramp);

        write_band_table(out_dir / (std::string("rope_bands_") + axis.name + ".csv"),
                         baseline, resonant, yarn, ramp);

        std::vector<double> positions;
        for (int p = 0; p <= 2 * axis.spec.train_len; ++p) {
            positions.push_back(static_cast<double>(p));
        }
        write_drift_matrix(out_dir / (std::string("rope_drift_") + axis.name + ".csv"),
                           phase_drift_map(baseline, resonant, positions));

        if (opt.pattern_variant == "baseline") {
            chosen_for_pattern.push_back(baseline);
        } else if (opt.pattern_variant == "yarn") {
            chosen_for_pattern.push_back(yarn);
        } else if (opt.pattern_variant == "resonant") {
            chosen_for_pattern.push_back(resonant);
        } else {
            throw std::runtime_error("rope-diagnose: unknown --pattern-variant '" +
                                     opt.pattern_variant +
                                     "' (baseline, resonant, or yarn)");
        }
    }

    if (!opt.pattern_out.empty()) {
        const int grid_h = axes[0].spec.infer_len;
        const int grid_w = axes[1].spec.infer_len;
        const PhaseGrid grid =
            cosine_pattern_2d(chosen_for_pattern[0], chosen_for_pattern[1],
                              opt.pattern_band_h, opt.pattern_band_w, grid_h, grid_w);
        GrayImage img(grid.widths, grid.heights);
        for (int h = 0; h < grid.heights; ++h) {
            for (int w = 0; w < grid.widths; ++w) {
                img.at(w, h) =
                    static_cast<std::uint8_t>(std::lround((grid.at(h, w) + 1.0) * 127.5));
            }
        }
        write_pgm(out_dir / opt.pattern_out, img);
    }
}

}  // namespace

void register_rope_diagnose(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<RopeDiagnoseOptions>();
    CLI::App* cmd = app.add_subcommand(
        "rope-diagnose",
        "Emit per-band rotary spectrum tables, phase-drift matrices, and an optional "
        "2D cosine pattern image");
    cmd->add_option("--height-dim", opt->height_dim, "Channels for the height axis (even)")
        ->capture_default_str();
    cmd->add_option("--width-dim", opt->width_dim, "Channels for the width axis (even)")
        ->capture_default_str();
    cmd->add_option("--base", opt->base, "Rotary base, > 1")->capture_default_str();
    cmd->add_option("--ntk", opt->ntk, "NTK factor, >= 1")->capture_default_str();
    cmd->add_option("--train-height", opt->train_height, "Training window height (patches)")
        ->capture_default_str();
    cmd->add_option("--train-width", opt->train_width, "Training window width (patches)")
        ->capture_default_str();
    cmd->add_option("--infer-height", opt->infer_height,
                    "Inference height (patches), defaults to the training height");
    cmd->add_option("--infer-width", opt->infer_width,
                    "Inference width (patches), defaults to the training width");
    cmd->add_option("--ramp-low", opt->ramp_low, "Ramp start on integer cycle counts");
    cmd->add_option("--ramp-high", opt->ramp_high, "Ramp end, must exceed --ramp-low");
    cmd->add_option("--output-dir", opt->output_dir, "Output directory")
        ->capture_default_str();
    cmd->add_option("--pattern-out", opt->pattern_out,
                    "Optional PGM filename for the 2D cosine pattern");
    cmd->add_option("--pattern-band-h", opt->pattern_band_h, "Height band for the pattern")
        ->capture_default_str();
    cmd->add_option("--pattern-band-w", opt->pattern_band_w, "Width band for the pattern")
        ->capture_default_str();
    cmd->add_option("--pattern-variant", opt->pattern_variant,
                    "Spectrum used for the pattern: baseline, resonant, or yarn")
        ->capture_default_str();
    cmd->callback([opt, &ctx]() { run(*opt, ctx); });
}

}  // namespace dit4k::tools
