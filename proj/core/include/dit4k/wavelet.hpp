#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dit4k/tensor.hpp"

namespace dit4k::wavelet {

// Subband index/order used everywhere, including the stacked channel layout.
enum Band : int { kLL = 0, kLH = 1, kHL = 2, kHH = 3 };

constexpr std::array<const char*, 4> kBandNames = {"LL", "LH", "HL", "HH"};

// One-level orthonormal Haar decomposition of a C x H x W tensor. Each band is
// C x H/2 x W/2; the stacked view concatenates bands along channels in the
// fixed order [LL, LH, HL, HH], giving 4C x H/2 x W/2.
struct SubbandTensor {
    Tensor3 ll, lh, hl, hh;

    int channels() const { return ll.channels; }
    int half_height() const { return ll.height; }
    int half_width() const { return ll.width; }
    std::size_t coefficient_count() const { return 4 * ll.size(); }

    const Tensor3& band(int b) const;
    Tensor3& band(int b);

    Tensor3 stacked() const;
    static SubbandTensor from_stacked(const Tensor3& stacked);
};

// Orthonormal analysis: on each 2x2 block [[a,b],[c,d]],
//   LL = (a+b+c+d)/2, LH = (a+b-c-d)/2, HL = (a-b+c-d)/2, HH = (a-b-c+d)/2.
// LH responds to variation along height (horizontal edges), HL along width.
// Requires even H and W; energy is preserved exactly up to rounding.
SubbandTensor dwt_forward(const Tensor3& latent);

// Exact inverse of dwt_forward (the block transform is its own inverse).
Tensor3 dwt_inverse(const SubbandTensor& subbands);

// Shared linear |coefficient| bins over [0, max_abs across bands].
struct SubbandHistogram {
    std::vector<double> bin_edges;                       // bin_count + 1 edges
    std::array<std::vector<std::uint64_t>, 4> counts;    // per band
};

struct SubbandStats {
    std::array<double, 4> energy_fraction{};             // sums to 1 for nonzero input
    std::vector<double> thresholds;
    std::array<std::vector<double>, 4> tail_fraction;    // P(|coef| > threshold) per band
    std::array<double, 4> max_abs{};
    SubbandHistogram histogram;
};

SubbandStats subband_stats(const SubbandTensor& subbands,
                           std::span<const double> thresholds,
                           int histogram_bins = 64);

// Default tail thresholds {0.5, 1.0}.
SubbandStats subband_stats(const SubbandTensor& subbands);

}  // namespace dit4k::wavelet
