#include "dit4k/rope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dit4k::rope {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

}  // namespace

const char* axis_name(Axis axis) {
    return axis == Axis::kHeight ? "height" : "width";
}

const char* variant_name(SpectrumVariant variant) {
    switch (variant) {
        case SpectrumVariant::kBaseline: return "baseline";
        case SpectrumVariant::kResonant: return "resonant";
        case SpectrumVariant::kResonantYarn: return "resonant_yarn";
    }
    return "unknown";
}

void AxisSpec::validate() const {
    require(channel_size > 0 && channel_size % 2 == 0,
            "AxisSpec: channel_size must be a positive even integer, got " +
                std::to_string(channel_size));
    require(train_len >= 1, "AxisSpec: train_len must be >= 1");
    require(infer_len >= 1, "AxisSpec: infer_len must be >= 1");
}

void RopeBaseConfig::validate() const {
    require(base > 1.0, "RopeBaseConfig: base must be > 1");
    require(ntk_factor >= 1.0, "RopeBaseConfig: ntk_factor must be >= 1");
}

void YarnRampConfig::validate() const {
    require(ramp_low >= 0.0 && ramp_low < ramp_high,
            "YarnRampConfig: requires 0 <= ramp_low < ramp_high (the ramp is a nondecreasing "
            "linear map on cycle counts); got ramp_low=" +
                std::to_string(ramp_low) + " ramp_high=" + std::to_string(ramp_high));
}

RotarySpectrum base_frequencies(const AxisSpec& spec, const RopeBaseConfig& cfg) {
    spec.validate();
    cfg.validate();

    const int bands = spec.band_count();
    const double effective_base = cfg.base * cfg.ntk_factor;

    RotarySpectrum out;
    out.axis = spec.axis;
    out.variant = SpectrumVariant::kBaseline;
    out.train_len = spec.train_len;
    out.omega.resize(bands);
    for (int k = 0; k < bands; ++k) {
        const double exponent = -2.0 * k / spec.channel_size;
        out.omega[k] = std::pow(effective_base, exponent);
    }
    out.cycles = cycle_counts(out, spec.train_len);
    return out;
}

std::vector<double> cycle_counts(const RotarySpectrum& spectrum, int train_len) {
    require(train_len >= 1, "cycle_counts: train_len must be >= 1");
    require(spectrum.variant != SpectrumVariant::kResonantYarn,
            "cycle_counts: yarn-scaled frequencies do not describe the training window");
    std::vector<double> cycles(spectrum.omega.size());
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        cycles[k] = train_len * spectrum.omega[k] / kTwoPi;
    }
    return cycles;
}

RotarySpectrum snap_to_resonance(const RotarySpectrum& spectrum, int train_len) {
    const std::vector<double> cycles = cycle_counts(spectrum, train_len);

    RotarySpectrum out;
    out.axis = spectrum.axis;
    out.variant = SpectrumVariant::kResonant;
    out.train_len = train_len;
    out.omega.resize(cycles.size());
    out.cycles.resize(cycles.size());
    out.cycles_snapped.resize(cycles.size());
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        // Round half up, then clamp away from zero so every band keeps rotating.
        const auto snapped = static_cast<std::int64_t>(std::floor(cycles[k] + 0.5));
        out.cycles_snapped[k] = std::max<std::int64_t>(1, snapped);
        out.omega[k] = kTwoPi * static_cast<double>(out.cycles_snapped[k]) / train_len;
        out.cycles[k] = static_cast<double>(out.cycles_snapped[k]);
    }
    return out;
}

double yarn_ramp(double cycle_count, const YarnRampConfig& cfg) {
    cfg.validate();
    if (cycle_count < cfg.ramp_low) {
        return 0.0;
    }
    if (cycle_count > cfg.ramp_high) {
        return 1.0;
    }
    return (cycle_count - cfg.ramp_low) / (cfg.ramp_high - cfg.ramp_low);
}

RotarySpectrum apply_yarn(const RotarySpectrum& resonant, const AxisSpec& spec,
                          const YarnRampConfig& cfg) {
    spec.validate();
    cfg.validate();
    require(resonant.variant == SpectrumVariant::kResonant,
            "apply_yarn: input spectrum must be resonant");
    require(resonant.train_len == spec.train_len,
            "apply_yarn: spectrum window does not match the axis spec");
    require(resonant.band_count() == spec.band_count(),
            "apply_yarn: band count does not match the axis spec");

    const double scale = spec.scale();
    require(scale >= 1.0, "apply_yarn: extrapolation scale infer_len/train_len must be >= 1");

    RotarySpectrum out = resonant;
    out.variant = SpectrumVariant::kResonantYarn;
    if (scale == 1.0) {
        return out;  // no extrapolation, frequencies unchanged
    }
    for (int k = 0; k < out.band_count(); ++k) {
        const double g = yarn_ramp(static_cast<double>(resonant.cycles_snapped[k]), cfg);
        out.omega[k] = (1.0 - g) * resonant.omega[k] / scale + g * resonant.omega[k];
        out.cycles[k] = spec.train_len * out.omega[k] / kTwoPi;
    }
    return out;
}

std::vector<double> phase(const RotarySpectrum& spectrum, double position) {
    require(position >= 0.0, "phase: position must be >= 0");
    std::vector<double> phases(spectrum.omega.size());
    for (std::size_t k = 0; k < phases.size(); ++k) {
        phases[k] = position * spectrum.omega[k];
    }
    return phases;
}

std::vector<double> rotate_pairs(std::span<const double> features,
                                 std::span<const double> phases) {
    require(features.size() == 2 * phases.size(),
            "rotate_pairs: feature length must be twice the band count");
    std::vector<double> rotated(features.size());
    for (std::size_t k = 0; k < phases.size(); ++k) {
        const double c = std::cos(phases[k]);
        const double s = std::sin(phases[k]);
        const double re = features[2 * k];
        const double im = features[2 * k + 1];
        rotated[2 * k] = re * c - im * s;
        rotated[2 * k + 1] = re * s + im * c;
    }
    return rotated;
}

double wrap_angle(double radians) {
    double wrapped = std::remainder(radians, kTwoPi);
    if (wrapped <= -std::numbers::pi) {
        wrapped = std::numbers::pi;
    }
    return wrapped;
}

std::vector<PhaseClosureRow> phase_closure_report(const RotarySpectrum& baseline,
                                                  const RotarySpectrum& resonant,
                                                  int train_len) {
    require(baseline.variant == SpectrumVariant::kBaseline,
            "phase_closure_report: first spectrum must be baseline");
    require(resonant.variant == SpectrumVariant::kResonant,
            "phase_closure_report: second spectrum must be resonant");
    require(baseline.band_count() == resonant.band_count(),
            "phase_closure_report: band counts differ");
    require(train_len >= 1, "phase_closure_report: train_len must be >= 1");

    std::vector<PhaseClosureRow> rows(baseline.omega.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].band = static_cast<int>(k);
        rows[k].cycles = train_len * baseline.omega[k] / kTwoPi;
        rows[k].closure_baseline = std::abs(wrap_angle(train_len * baseline.omega[k]));
        rows[k].closure_resonant = std::abs(wrap_angle(train_len * resonant.omega[k]));
    }
    return rows;
}

PhaseDriftMap phase_drift_map(const RotarySpectrum& baseline, const RotarySpectrum& resonant,
                              std::span<const double> positions) {
    require(baseline.band_count() == resonant.band_count(),
            "phase_drift_map: band counts differ");
    require(std::is_sorted(positions.begin(), positions.end()),
            "phase_drift_map: positions must be sorted ascending");

    PhaseDriftMap map;
    map.positions.assign(positions.begin(), positions.end());
    map.band_count = baseline.band_count();
    map.values.resize(static_cast<std::size_t>(map.band_count) * positions.size());
    for (int k = 0; k < map.band_count; ++k) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const double delta =
                positions[i] * baseline.omega[k] - positions[i] * resonant.omega[k];
            map.values[static_cast<std::size_t>(k) * positions.size() + i] =
                std::abs(wrap_angle(delta));
        }
    }
    return map;
}

PhaseGrid cosine_pattern_2d(double omega_h, double omega_w, int heights, int widths) {
    require(heights >= 1 && widths >= 1, "cosine_pattern_2d: grid extents must be >= 1");
    PhaseGrid grid;
    grid.heights = heights;
    grid.widths = widths;
    grid.values.resize(static_cast<std::size_t>(heights) * widths);
    for (int h = 0; h < heights; ++h) {
        for (int w = 0; w < widths; ++w) {
            grid.values[static_cast<std::size_t>(h) * widths + w] =
                std::cos(h * omega_h + w * omega_w);
        }
    }
    return grid;
}

PhaseGrid cosine_pattern_2d(const RotarySpectrum& height_spectrum,
                            const RotarySpectrum& width_spectrum, int band_h, int band_w,
                            int heights, int widths) {
    require(band_h >= 0 && band_h < height_spectrum.band_count(),
            "cosine_pattern_2d: height band out of range");
    require(band_w >= 0 && band_w < width_spectrum.band_count(),
            "cosine_pattern_2d: width band out of range");
    return cosine_pattern_2d(height_spectrum.omega[band_h], width_spectrum.omega[band_w],
                             heights, widths);
}

}  // namespace dit4k::rope
