#include "synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dit4k::testing {

GrayImage constant_image(int width, int height, std::uint8_t value) {
    GrayImage img(width, height);
    std::fill(img.pixels.begin(), img.pixels.end(), value);
    return img;
}

GrayImage noise_image(int width, int height, std::uint64_t seed) {
    GrayImage img(width, height);
    std::mt19937_64 rng(seed);
    std::size_t i = 0;
    // Eight bytes per draw keeps 4K fills cheap.
    while (i + 8 <= img.pixels.size()) {
        std::uint64_t block = rng();
        for (int b = 0; b < 8; ++b) {
            img.pixels[i++] = static_cast<std::uint8_t>(block >> (8 * b));
        }
    }
    while (i < img.pixels.size()) {
        img.pixels[i++] = static_cast<std::uint8_t>(rng());
    }
    return img;
}

GrayImage checkerboard_image(int width, int height, std::uint8_t low, std::uint8_t high) {
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.at(x, y) = ((x + y) % 2 == 0) ? low : high;
        }
    }
    return img;
}

GrayImage half_flat_image(int width, int height, std::uint64_t seed,
                          std::uint8_t flat_value) {
    GrayImage img = noise_image(width, height, seed);
    const int split = width / 2;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < split; ++x) {
            img.at(x, y) = flat_value;
        }
    }
    return img;
}

GrayImage equalized_128_image(int width, int height, std::uint64_t seed) {
    const std::size_t total = static_cast<std::size_t>(width) * height;
    if (total % 128 != 0) {
        throw std::invalid_argument("equalized_128_image: pixel count must divide by 128");
    }
    GrayImage img(width, height);
    const std::size_t per_value = total / 128;
    for (std::size_t i = 0; i < total; ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(i / per_value);
    }
    std::mt19937_64 rng(seed);
    std::shuffle(img.pixels.begin(), img.pixels.end(), rng);
    return img;
}

Tensor3 random_tensor(int channels, int height, int width, std::mt19937_64& rng,
                      double amplitude) {
    Tensor3 t(channels, height, width);
    std::normal_distribution<double> gauss(0.0, amplitude);
    for (double& v : t.data) {
        v = gauss(rng);
    }
    return t;
}

std::filesystem::path fresh_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace dit4k::testing
