#include "dit4k/image.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <openssl/evp.h>

namespace dit4k {

GrayImage decode_gray(const std::filesystem::path& path) {
    const cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (raw.empty()) {
        throw std::runtime_error("cannot decode image: " + path.string());
    }

    cv::Mat bytes;
    if (raw.depth() != CV_8U) {
        // 16-bit sources are scaled down to 8 bits before luma conversion.
        raw.convertTo(bytes, CV_8U, 255.0 / 65535.0);
    } else {
        bytes = raw;
    }

    GrayImage out(bytes.cols, bytes.rows);
    if (bytes.channels() == 1) {
        for (int y = 0; y < bytes.rows; ++y) {
            const std::uint8_t* row = bytes.ptr<std::uint8_t>(y);
            std::copy(row, row + bytes.cols, out.pixels.begin() +
                                                 static_cast<std::size_t>(y) * bytes.cols);
        }
        return out;
    }
    if (bytes.channels() != 3 && bytes.channels() != 4) {
        throw std::runtime_error("unsupported channel count in image: " + path.string());
    }
    const int ch = bytes.channels();
    for (int y = 0; y < bytes.rows; ++y) {
        const std::uint8_t* row = bytes.ptr<std::uint8_t>(y);
        for (int x = 0; x < bytes.cols; ++x) {
            const double b = row[x * ch + 0];  // OpenCV decodes as BGR(A)
            const double g = row[x * ch + 1];
            const double r = row[x * ch + 2];
            const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(luma));
        }
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write image: " + path.string());
    }
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) {
        throw std::runtime_error("short write: " + path.string());
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for hashing: " + path.string());
    }

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 init failed");
    }
    std::vector<char> buffer(1 << 20);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(got)) != 1) {
            EVP_MD_CTX_free(ctx);
            throw std::runtime_error("sha256 update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 final failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string result;
    result.reserve(2 * digest_len);
    for (unsigned int i = 0; i < digest_len; ++i) {
        result.push_back(hex[digest[i] >> 4]);
        result.push_back(hex[digest[i] & 0xF]);
    }
    return result;
}

}  // namespace dit4k
