#pragma once

#include <filesystem>

#include "dit4k/tensor.hpp"

namespace dit4k {

// Flat binary latent-tensor format (".lat"), little-endian:
//   bytes 0..3   magic "LAT1"
//   bytes 4..7   uint32 dtype code: 0 = float32, 1 = float64
//   bytes 8..19  int32 channels, height, width
//   bytes 20..   row-major data, channel-major then rows then columns
Tensor3 read_latent(const std::filesystem::path& path);
void write_latent(const std::filesystem::path& path, const Tensor3& tensor,
                  bool as_float32 = false);

}  // namespace dit4k
