#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dit4k {

// Dense row-major [channel][row][col] tensor of doubles. This is the latent
// container shared by the wavelet transform and the training objective.
struct Tensor3 {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Tensor3() = default;

    Tensor3(int c, int h, int w) : channels(c), height(h), width(w) {
        if (c <= 0 || h <= 0 || w <= 0) {
            throw std::invalid_argument("Tensor3: dimensions must be positive");
        }
        data.assign(static_cast<std::size_t>(c) * h * w, 0.0);
    }

    std::size_t size() const { return data.size(); }

    std::size_t index(int c, int y, int x) const {
        return (static_cast<std::size_t>(c) * height + y) * width + x;
    }

    double at(int c, int y, int x) const { return data[index(c, y, x)]; }
    double& at(int c, int y, int x) { return data[index(c, y, x)]; }

    bool same_shape(const Tensor3& other) const {
        return channels == other.channels && height == other.height && width == other.width;
    }
};

inline void require_same_shape(const Tensor3& a, const Tensor3& b, const char* what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(what) + ": tensor shapes do not match");
    }
}

}  // namespace dit4k
