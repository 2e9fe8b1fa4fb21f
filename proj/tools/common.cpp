#include "common.hpp"

#include <cstdio>
#include <stdexcept>

namespace dit4k::tools {

const config::ToolConfig& ToolContext::config() {
    if (!loaded_.has_value()) {
        if (config_path.empty()) {
            loaded_ = config::ToolConfig{};
        } else {
            loaded_ = config::load_config(config_path);
        }
    }
    return *loaded_;
}

std::filesystem::path ensure_output_dir(const std::string& dir) {
    std::filesystem::path path(dir.empty() ? "." : dir);
    std::filesystem::create_directories(path);
    return path;
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    // Trim to the shortest representation that still round-trips.
    for (int precision = 1; precision < 17; ++precision) {
        char shorter[64];
        std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
        if (std::strtod(shorter, nullptr) == value) {
            return shorter;
        }
    }
    return buffer;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void CsvWriter::cell(const std::string& text) {
    if (row_started_) {
        out_ << ',';
    }
    out_ << text;
    row_started_ = true;
}

void CsvWriter::cell(double value) { cell(format_double(value)); }

void CsvWriter::cell(std::int64_t value) { cell(std::to_string(value)); }

void CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
}

CsvWriter::~CsvWriter() = default;

}  // namespace dit4k::tools
