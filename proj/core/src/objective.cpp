#include "dit4k/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dit4k/wavelet.hpp"

namespace dit4k::objective {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

void require_unit_interval(double t, const char* what) {
    require(t > 0.0 && t < 1.0,
            std::string(what) + ": t must lie strictly inside (0, 1), got " + std::to_string(t));
}

}  // namespace

void FlowSample::validate() const {
    require_same_shape(clean, noise, "FlowSample");
    require_unit_interval(t, "FlowSample");
}

void MinSnrConfig::validate() const {
    require(snr_clip > 0.0, "MinSnrConfig: snr_clip must be > 0");
    require(snr_exponent >= 0.0, "MinSnrConfig: snr_exponent must be >= 0");
}

void HuberSchedule::validate() const {
    require(c_min > 0.0, "HuberSchedule: c_min must be > 0");
    require(c_max >= c_min, "HuberSchedule: c_max must be >= c_min");
    require(exponent >= 0.0 && exponent <= 1.0, "HuberSchedule: exponent must be in [0, 1]");
}

void VaeLossWeights::validate() const {
    require(wavelet >= 0.0 && perceptual >= 0.0 && l2 >= 0.0,
            "VaeLossWeights: weights must be >= 0");
    require(wavelet > 0.0 || perceptual > 0.0 || l2 > 0.0,
            "VaeLossWeights: at least one weight must be nonzero");
}

Tensor3 interpolate(const FlowSample& sample) {
    sample.validate();
    Tensor3 z_t = sample.clean;
    for (std::size_t i = 0; i < z_t.size(); ++i) {
        z_t.data[i] = (1.0 - sample.t) * sample.clean.data[i] + sample.t * sample.noise.data[i];
    }
    return z_t;
}

Tensor3 data_prediction(const Tensor3& z_t, const Tensor3& v_pred, double t) {
    require_same_shape(z_t, v_pred, "data_prediction");
    require_unit_interval(t, "data_prediction");
    Tensor3 zhat = z_t;
    for (std::size_t i = 0; i < zhat.size(); ++i) {
        zhat.data[i] = z_t.data[i] - t * v_pred.data[i];
    }
    return zhat;
}

double snr(double t) {
    require_unit_interval(t, "snr");
    const double ratio = (1.0 - t) / t;
    return ratio * ratio;
}

double timestep_weight(double t, const MinSnrConfig& cfg) {
    cfg.validate();
    const double clipped = std::min(snr(t), cfg.snr_clip);
    return t / (1.0 - t) * std::pow(clipped, cfg.snr_exponent);
}

double huber_threshold(double t, const HuberSchedule& schedule, const MinSnrConfig& cfg) {
    schedule.validate();
    cfg.validate();
    const double clipped = std::min(snr(t), cfg.snr_clip);
    return schedule.c_min +
           (schedule.c_max - schedule.c_min) * std::pow(clipped / cfg.snr_clip, schedule.exponent);
}

PseudoHuber pseudo_huber(double residual, double c) {
    require(c > 0.0, "pseudo_huber: threshold c must be > 0");
    const double q = residual / c;
    const double root = std::sqrt(1.0 + q * q);
    PseudoHuber out;
    out.value = residual * residual / (1.0 + root);
    out.derivative = residual / root;
    return out;
}

LossResult snr_hw_loss(const FlowSample& sample, const Tensor3& v_pred,
                       const MinSnrConfig& min_snr, const HuberSchedule& schedule) {
    sample.validate();
    require_same_shape(sample.clean, v_pred, "snr_hw_loss");

    const Tensor3 z_t = interpolate(sample);
    const Tensor3 zhat = data_prediction(z_t, v_pred, sample.t);

    const wavelet::SubbandTensor w_pred = wavelet::dwt_forward(zhat);
    const wavelet::SubbandTensor w_clean = wavelet::dwt_forward(sample.clean);

    const double c = huber_threshold(sample.t, schedule, min_snr);
    const double weight = timestep_weight(sample.t, min_snr);
    const double n = static_cast<double>(w_pred.coefficient_count());

    // Accumulate the penalty and its derivative in wavelet space, then pull
    // the derivative back through the orthonormal transform (self-adjoint) and
    // the affine prediction zhat = z_t - t*v.
    wavelet::SubbandTensor dloss_dw = w_pred;
    double penalty_sum = 0.0;
    for (int b = 0; b < 4; ++b) {
        const Tensor3& pred_band = w_pred.band(b);
        const Tensor3& clean_band = w_clean.band(b);
        Tensor3& grad_band = dloss_dw.band(b);
        for (std::size_t i = 0; i < pred_band.size(); ++i) {
            const double residual = pred_band.data[i] - clean_band.data[i];
            const PseudoHuber ph = pseudo_huber(residual, c);
            penalty_sum += ph.value;
            grad_band.data[i] = ph.derivative;
        }
    }

    LossResult result;
    result.loss = weight * penalty_sum / n;
    result.grad_v_pred = wavelet::dwt_inverse(dloss_dw);
    const double chain = -sample.t * weight / n;
    for (double& g : result.grad_v_pred.data) {
        g *= chain;
    }
    return result;
}

double vae_combined_loss(double wavelet_hf_term, double perceptual_term, double l2_term,
                         const VaeLossWeights& weights) {
    weights.validate();
    require(wavelet_hf_term >= 0.0 && perceptual_term >= 0.0 && l2_term >= 0.0,
            "vae_combined_loss: loss terms must be >= 0");
    return weights.wavelet * wavelet_hf_term + weights.perceptual * perceptual_term +
           weights.l2 * l2_term;
}

GradientCheckResult gradient_check(const FlowSample& sample, const Tensor3& v_pred,
                                   const MinSnrConfig& min_snr, const HuberSchedule& schedule,
                                   double step) {
    require(step > 0.0, "gradient_check: step must be > 0");

    const LossResult analytic = snr_hw_loss(sample, v_pred, min_snr, schedule);

    GradientCheckResult out;
    double fd_inf_norm = 0.0;
    Tensor3 probe = v_pred;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const double saved = probe.data[i];
        probe.data[i] = saved + step;
        const double loss_plus = snr_hw_loss(sample, probe, min_snr, schedule).loss;
        probe.data[i] = saved - step;
        const double loss_minus = snr_hw_loss(sample, probe, min_snr, schedule).loss;
        probe.data[i] = saved;

        const double fd = (loss_plus - loss_minus) / (2.0 * step);
        out.max_abs_error =
            std::max(out.max_abs_error, std::abs(fd - analytic.grad_v_pred.data[i]));
        fd_inf_norm = std::max(fd_inf_norm, std::abs(fd));
        out.grad_inf_norm = std::max(out.grad_inf_norm, std::abs(analytic.grad_v_pred.data[i]));
    }

    const double denom = std::max({fd_inf_norm, out.grad_inf_norm, 1e-300});
    out.max_rel_error = out.max_abs_error / denom;
    return out;
}

}  // namespace dit4k::objective
