#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dit4k::rope {

enum class Axis { kHeight, kWidth };

enum class SpectrumVariant { kBaseline, kResonant, kResonantYarn };

const char* axis_name(Axis axis);
const char* variant_name(SpectrumVariant variant);

// One spatial axis of the 2D rotary embedding: channel budget and the
// training/inference window extents in patch units.
struct AxisSpec {
    Axis axis = Axis::kHeight;
    int channel_size = 0;  // d_a, must be even
    int train_len = 0;     // L_a, patches seen during training
    int infer_len = 0;     // L'_a, patches at inference

    int band_count() const { return channel_size / 2; }
    double scale() const { return static_cast<double>(infer_len) / train_len; }
    void validate() const;
};

struct RopeBaseConfig {
    double base = 10000.0;   // rotary base b > 1
    double ntk_factor = 1.0; // eta >= 1, multiplies the base
    void validate() const;
};

// Linear ramp over cycle counts that gates band-wise extrapolation scaling.
// Bands below ramp_low are fully rescaled, bands above ramp_high are left
// untouched, with linear interpolation in between.
struct YarnRampConfig {
    double ramp_low = 0.0;
    double ramp_high = 0.0;
    void validate() const;  // requires 0 <= ramp_low < ramp_high
};

// Per-axis frequency table. `cycles` holds the (real) number of cycles each
// band completes over `train_len`; `cycles_snapped` holds the integer cycle
// counts and is populated for kResonant and kResonantYarn spectra only.
// For kResonant, omega[k] == 2*pi*cycles_snapped[k]/train_len.
struct RotarySpectrum {
    Axis axis = Axis::kHeight;
    SpectrumVariant variant = SpectrumVariant::kBaseline;
    int train_len = 0;
    std::vector<double> omega;                  // radians per patch, one per band
    std::vector<double> cycles;                 // cycles over the training window
    std::vector<std::int64_t> cycles_snapped;   // integer cycles, >= 1

    int band_count() const { return static_cast<int>(omega.size()); }
};

// omega_k = (base*ntk)^(-2k/d), k = 0..d/2-1. Strictly decreasing, omega_0 = 1.
RotarySpectrum base_frequencies(const AxisSpec& spec, const RopeBaseConfig& cfg);

// r_k = train_len * omega_k / (2*pi). Rejects kResonantYarn input, whose
// frequencies no longer describe the training window.
std::vector<double> cycle_counts(const RotarySpectrum& spectrum, int train_len);

// Projects every band onto an integer number of cycles over the window:
// r_hat = max(1, floor(r + 1/2)), omega_hat = 2*pi*r_hat/train_len.
// Snapping an already-resonant spectrum is a fixed point.
RotarySpectrum snap_to_resonance(const RotarySpectrum& spectrum, int train_len);

// Ramp value in [0,1]: 0 below ramp_low, 1 above ramp_high, linear between.
double yarn_ramp(double cycle_count, const YarnRampConfig& cfg);

// Band-wise interpolation between position-interpolation scaling and no
// scaling: omega_yarn = (1-g)*omega_hat/s + g*omega_hat with g the ramp value
// at the band's integer cycle count. Requires scale s >= 1; s == 1 returns
// the input frequencies unchanged (bit-identical).
RotarySpectrum apply_yarn(const RotarySpectrum& resonant, const AxisSpec& spec,
                          const YarnRampConfig& cfg);

// phi_k = position * omega_k for every band. Position is in patch units, >= 0.
std::vector<double> phase(const RotarySpectrum& spectrum, double position);

// Rotates interleaved (re, im) feature pairs by the per-band phases:
// pair_k *= exp(i*phi_k). features.size() must equal 2*phases.size().
std::vector<double> rotate_pairs(std::span<const double> features,
                                 std::span<const double> phases);

// Reduces an angle to (-pi, pi].
double wrap_angle(double radians);

// Boundary phase mismatch at p = train_len, per band, for a baseline spectrum
// and its resonant counterpart. Resonant rows close to zero by construction.
struct PhaseClosureRow {
    int band = 0;
    double cycles = 0.0;            // baseline r_k
    double closure_baseline = 0.0;  // |wrap(L * omega_k)|
    double closure_resonant = 0.0;  // |wrap(L * omega_hat_k)|
};

std::vector<PhaseClosureRow> phase_closure_report(const RotarySpectrum& baseline,
                                                  const RotarySpectrum& resonant,
                                                  int train_len);

// |wrap(p*omega_k - p*omega_hat_k)| sampled on a sorted position grid.
// Values are band-major: values[band * positions.size() + position_index].
struct PhaseDriftMap {
    std::vector<double> positions;
    int band_count = 0;
    std::vector<double> values;  // in [0, pi]

    double at(int band, std::size_t position_index) const {
        return values[static_cast<std::size_t>(band) * positions.size() + position_index];
    }
};

PhaseDriftMap phase_drift_map(const RotarySpectrum& baseline, const RotarySpectrum& resonant,
                              std::span<const double> positions);

// f(h, w) = cos(h*omega_h + w*omega_w) on an heights x widths patch grid.
struct PhaseGrid {
    int heights = 0;
    int widths = 0;
    std::vector<double> values;  // row-major, in [-1, 1]

    double at(int h, int w) const { return values[static_cast<std::size_t>(h) * widths + w]; }
};

PhaseGrid cosine_pattern_2d(double omega_h, double omega_w, int heights, int widths);

// Convenience overload selecting one band per axis spectrum.
PhaseGrid cosine_pattern_2d(const RotarySpectrum& height_spectrum,
                            const RotarySpectrum& width_spectrum, int band_h, int band_w,
                            int heights, int widths);

}  // namespace dit4k::rope
