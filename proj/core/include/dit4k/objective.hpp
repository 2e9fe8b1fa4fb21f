#pragma once

#include <cstdint>

#include "dit4k/tensor.hpp"

namespace dit4k::objective {

// One training draw on the straight interpolation path between a clean latent
// and Gaussian noise. t is strictly inside (0, 1): t = 0 is the clean latent,
// t = 1 is pure noise.
struct FlowSample {
    Tensor3 clean;
    Tensor3 noise;
    double t = 0.0;
    void validate() const;
};

// Min-SNR weighting: SNR is clipped at snr_clip before being raised to
// snr_exponent. There is no canonical default for either value; callers must
// choose them explicitly.
struct MinSnrConfig {
    double snr_clip = 0.0;      // gamma_s > 0
    double snr_exponent = 0.0;  // beta_w >= 0
    void validate() const;
};

// SNR-dependent Pseudo-Huber threshold: c(t) shrinks toward c_min as noise
// dominates and grows toward c_max at high SNR.
struct HuberSchedule {
    double c_min = 0.2;
    double c_max = 1.0;
    double exponent = 1.0;  // alpha_c in [0, 1]
    void validate() const;
};

struct VaeLossWeights {
    double wavelet = 0.2;
    double perceptual = 0.1;
    double l2 = 1.0;
    void validate() const;  // all >= 0, not all zero
};

// z_t = (1-t)*clean + t*noise.
Tensor3 interpolate(const FlowSample& sample);

// zhat = z_t - t*v_pred. Exact inversion when v_pred is the true straight-path
// velocity noise - clean.
Tensor3 data_prediction(const Tensor3& z_t, const Tensor3& v_pred, double t);

// SNR(t) = ((1-t)/t)^2 on the straight path. Requires t in (0, 1).
double snr(double t);

// omega(t) = t/(1-t) * min(SNR(t), snr_clip)^snr_exponent.
double timestep_weight(double t, const MinSnrConfig& cfg);

// c(t) = c_min + (c_max - c_min) * (min(SNR, clip)/clip)^exponent.
double huber_threshold(double t, const HuberSchedule& schedule, const MinSnrConfig& cfg);

// rho_c(r) = c^2 * (sqrt(1 + (r/c)^2) - 1), evaluated as r^2/(1 + sqrt(1+(r/c)^2))
// so the quadratic regime keeps full precision for r << c.
struct PseudoHuber {
    double value = 0.0;
    double derivative = 0.0;  // d rho / d r = r / sqrt(1 + (r/c)^2)
};

PseudoHuber pseudo_huber(double residual, double c);

// Full objective: residuals are measured in the stacked wavelet space of the
// data prediction vs. the clean latent, penalized with the scheduled
// Pseudo-Huber, averaged over all N coefficients and scaled by omega(t).
// The gradient with respect to v_pred is exact (hand-derived through the
// affine prediction and the orthonormal transform).
struct LossResult {
    double loss = 0.0;
    Tensor3 grad_v_pred;
};

LossResult snr_hw_loss(const FlowSample& sample, const Tensor3& v_pred,
                       const MinSnrConfig& min_snr, const HuberSchedule& schedule);

// weights.wavelet*wavelet_hf + weights.perceptual*perceptual + weights.l2*l2.
// Terms must be nonnegative; the perceptual term is an externally computed scalar.
double vae_combined_loss(double wavelet_hf_term, double perceptual_term, double l2_term,
                         const VaeLossWeights& weights);

// Central-difference verification of the analytic v_pred gradient. The
// relative error is ||g_fd - g_an||_inf / max(||g_fd||_inf, ||g_an||_inf).
struct GradientCheckResult {
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    double grad_inf_norm = 0.0;
};

GradientCheckResult gradient_check(const FlowSample& sample, const Tensor3& v_pred,
                                   const MinSnrConfig& min_snr, const HuberSchedule& schedule,
                                   double step = 1e-4);

}  // namespace dit4k::objective
