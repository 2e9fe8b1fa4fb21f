#include "dit4k/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dit4k::wavelet {

const Tensor3& SubbandTensor::band(int b) const {
    switch (b) {
        case kLL: return ll;
        case kLH: return lh;
        case kHL: return hl;
        case kHH: return hh;
    }
    throw std::invalid_argument("SubbandTensor: band index out of range");
}

Tensor3& SubbandTensor::band(int b) {
    return const_cast<Tensor3&>(static_cast<const SubbandTensor*>(this)->band(b));
}

Tensor3 SubbandTensor::stacked() const {
    Tensor3 out(4 * channels(), half_height(), half_width());
    const std::size_t band_size = ll.size();
    for (int b = 0; b < 4; ++b) {
        std::copy(band(b).data.begin(), band(b).data.end(),
                  out.data.begin() + b * band_size);
    }
    return out;
}

SubbandTensor SubbandTensor::from_stacked(const Tensor3& stacked) {
    if (stacked.channels % 4 != 0) {
        throw std::invalid_argument("SubbandTensor: stacked channel count must be 4*C");
    }
    const int c = stacked.channels / 4;
    SubbandTensor out;
    const std::size_t band_size =
        static_cast<std::size_t>(c) * stacked.height * stacked.width;
    for (int b = 0; b < 4; ++b) {
        Tensor3 t(c, stacked.height, stacked.width);
        std::copy(stacked.data.begin() + b * band_size,
                  stacked.data.begin() + (b + 1) * band_size, t.data.begin());
        out.band(b) = std::move(t);
    }
    return out;
}

SubbandTensor dwt_forward(const Tensor3& latent) {
    if (latent.height % 2 != 0 || latent.width % 2 != 0) {
        throw std::invalid_argument("dwt_forward: height and width must be even");
    }
    const int hh = latent.height / 2;
    const int hw = latent.width / 2;

    SubbandTensor out;
    out.ll = Tensor3(latent.channels, hh, hw);
    out.lh = Tensor3(latent.channels, hh, hw);
    out.hl = Tensor3(latent.channels, hh, hw);
    out.hh = Tensor3(latent.channels, hh, hw);

    for (int c = 0; c < latent.channels; ++c) {
        for (int y = 0; y < hh; ++y) {
            for (int x = 0; x < hw; ++x) {
                const double a = latent.at(c, 2 * y, 2 * x);
                const double b = latent.at(c, 2 * y, 2 * x + 1);
                const double cc = latent.at(c, 2 * y + 1, 2 * x);
                const double d = latent.at(c, 2 * y + 1, 2 * x + 1);
                out.ll.at(c, y, x) = 0.5 * (a + b + cc + d);
                out.lh.at(c, y, x) = 0.5 * (a + b - cc - d);
                out.hl.at(c, y, x) = 0.5 * (a - b + cc - d);
                out.hh.at(c, y, x) = 0.5 * (a - b - cc + d);
            }
        }
    }
    return out;
}

Tensor3 dwt_inverse(const SubbandTensor& subbands) {
    for (int b = 1; b < 4; ++b) {
        require_same_shape(subbands.ll, subbands.band(b), "dwt_inverse");
    }
    const int hh = subbands.half_height();
    const int hw = subbands.half_width();
    Tensor3 out(subbands.channels(), 2 * hh, 2 * hw);

    for (int c = 0; c < out.channels; ++c) {
        for (int y = 0; y < hh; ++y) {
            for (int x = 0; x < hw; ++x) {
                const double ll = subbands.ll.at(c, y, x);
                const double lh = subbands.lh.at(c, y, x);
                const double hl = subbands.hl.at(c, y, x);
                const double hhv = subbands.hh.at(c, y, x);
                out.at(c, 2 * y, 2 * x) = 0.5 * (ll + lh + hl + hhv);
                out.at(c, 2 * y, 2 * x + 1) = 0.5 * (ll + lh - hl - hhv);
                out.at(c, 2 * y + 1, 2 * x) = 0.5 * (ll - lh + hl - hhv);
                out.at(c, 2 * y + 1, 2 * x + 1) = 0.5 * (ll - lh - hl + hhv);
            }
        }
    }
    return out;
}

SubbandStats subband_stats(const SubbandTensor& subbands,
                           std::span<const double> thresholds,
                           int histogram_bins) {
    if (subbands.ll.size() == 0) {
        throw std::invalid_argument("subband_stats: empty subband tensor");
    }
    if (histogram_bins < 1) {
        throw std::invalid_argument("subband_stats: histogram_bins must be >= 1");
    }

    SubbandStats stats;
    stats.thresholds.assign(thresholds.begin(), thresholds.end());

    std::array<double, 4> energy{};
    double total_energy = 0.0;
    double global_max = 0.0;
    for (int b = 0; b < 4; ++b) {
        for (double v : subbands.band(b).data) {
            energy[b] += v * v;
            global_max = std::max(global_max, std::abs(v));
        }
        total_energy += energy[b];
        stats.max_abs[b] = 0.0;
    }

    const double count = static_cast<double>(subbands.ll.size());
    stats.histogram.bin_edges.resize(histogram_bins + 1);
    const double hist_top = global_max > 0.0 ? global_max : 1.0;
    for (int i = 0; i <= histogram_bins; ++i) {
        stats.histogram.bin_edges[i] = hist_top * i / histogram_bins;
    }

    for (int b = 0; b < 4; ++b) {
        stats.energy_fraction[b] = total_energy > 0.0 ? energy[b] / total_energy : 0.0;
        stats.tail_fraction[b].assign(stats.thresholds.size(), 0.0);
        stats.histogram.counts[b].assign(histogram_bins, 0);
        for (double v : subbands.band(b).data) {
            const double mag = std::abs(v);
            stats.max_abs[b] = std::max(stats.max_abs[b], mag);
            for (std::size_t t = 0; t < stats.thresholds.size(); ++t) {
                if (mag > stats.thresholds[t]) {
                    stats.tail_fraction[b][t] += 1.0;
                }
            }
            int bin = static_cast<int>(mag / hist_top * histogram_bins);
            bin = std::clamp(bin, 0, histogram_bins - 1);
            ++stats.histogram.counts[b][bin];
        }
        for (double& f : stats.tail_fraction[b]) {
            f /= count;
        }
    }
    return stats;
}

SubbandStats subband_stats(const SubbandTensor& subbands) {
    const std::array<double, 2> defaults = {0.5, 1.0};
    return subband_stats(subbands, defaults);
}

}  // namespace dit4k::wavelet
