#include "dit4k/latent_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace dit4k {

namespace {

static_assert(std::endian::native == std::endian::little,
              "latent file I/O assumes a little-endian host");

constexpr std::array<char, 4> kMagic = {'L', 'A', 'T', '1'};
constexpr std::uint32_t kFloat32 = 0;
constexpr std::uint32_t kFloat64 = 1;

template <typename T>
void read_raw(std::istream& in, T* out, std::size_t count, const std::string& path) {
    in.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(sizeof(T) * count));
    if (static_cast<std::size_t>(in.gcount()) != sizeof(T) * count) {
        throw std::runtime_error("truncated latent file: " + path);
    }
}

}  // namespace

Tensor3 read_latent(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open latent file: " + path.string());
    }

    std::array<char, 4> magic{};
    read_raw(in, magic.data(), magic.size(), path.string());
    if (magic != kMagic) {
        throw std::runtime_error("bad magic in latent file: " + path.string());
    }
    std::uint32_t dtype = 0;
    read_raw(in, &dtype, 1, path.string());
    if (dtype != kFloat32 && dtype != kFloat64) {
        throw std::runtime_error("unknown dtype code in latent file: " + path.string());
    }
    std::int32_t dims[3];
    read_raw(in, dims, 3, path.string());
    if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
        throw std::runtime_error("non-positive dimensions in latent file: " + path.string());
    }

    Tensor3 tensor(dims[0], dims[1], dims[2]);
    if (dtype == kFloat64) {
        read_raw(in, tensor.data.data(), tensor.size(), path.string());
    } else {
        std::vector<float> buffer(tensor.size());
        read_raw(in, buffer.data(), buffer.size(), path.string());
        for (std::size_t i = 0; i < buffer.size(); ++i) {
            tensor.data[i] = static_cast<double>(buffer[i]);
        }
    }
    return tensor;
}

void write_latent(const std::filesystem::path& path, const Tensor3& tensor, bool as_float32) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write latent file: " + path.string());
    }
    out.write(kMagic.data(), kMagic.size());
    const std::uint32_t dtype = as_float32 ? kFloat32 : kFloat64;
    out.write(reinterpret_cast<const char*>(&dtype), sizeof(dtype));
    const std::int32_t dims[3] = {tensor.channels, tensor.height, tensor.width};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    if (as_float32) {
        std::vector<float> buffer(tensor.size());
        for (std::size_t i = 0; i < buffer.size(); ++i) {
            buffer[i] = static_cast<float>(tensor.data[i]);
        }
        out.write(reinterpret_cast<const char*>(buffer.data()),
                  static_cast<std::streamsize>(sizeof(float) * buffer.size()));
    } else {
        out.write(reinterpret_cast<const char*>(tensor.data.data()),
                  static_cast<std::streamsize>(sizeof(double) * tensor.size()));
    }
    if (!out) {
        throw std::runtime_error("short write: " + path.string());
    }
}

}  // namespace dit4k
