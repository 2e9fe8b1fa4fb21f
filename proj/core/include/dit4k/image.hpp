#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace dit4k {

// 8-bit single-channel raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

// Decodes any supported raster format (png/jpeg/pnm/bmp/...) to 8-bit luma.
// Color inputs are converted with BT.601 weights: round(0.299R + 0.587G + 0.114B).
// Throws on unreadable or undecodable files.
GrayImage decode_gray(const std::filesystem::path& path);

// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// Lowercase-hex SHA-256 of a file's exact bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace dit4k
