#include "dit4k/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dit4k {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kKnownKeys = {
    "id", "width", "height", "path",
    "q_align", "artimuse", "flatness_flag_ratio", "flatness_mean_score", "entropy_bits",
    "character", "person_detected", "nsfw_flagged",
    "caption_en", "caption_zh", "content_hash", "filter_trace",
    "bucket_width", "bucket_height", "crop_x", "crop_y", "crop_width", "crop_height",
};

template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->get<T>();
}

}  // namespace

ImageMetaRecord record_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("manifest record must be a JSON object");
    }
    ImageMetaRecord r;
    if (!j.contains("id") || !j.at("id").is_string()) {
        throw std::invalid_argument("manifest record: missing string field 'id'");
    }
    r.id = j.at("id").get<std::string>();
    if (!j.contains("width") || !j.contains("height")) {
        throw std::invalid_argument("manifest record '" + r.id +
                                    "': missing 'width' or 'height'");
    }
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    if (r.width <= 0 || r.height <= 0) {
        throw std::invalid_argument("manifest record '" + r.id +
                                    "': width and height must be positive");
    }

    r.path = opt_field<std::string>(j, "path");
    r.q_align = opt_field<double>(j, "q_align");
    r.artimuse = opt_field<double>(j, "artimuse");
    r.flatness_flag_ratio = opt_field<double>(j, "flatness_flag_ratio");
    r.flatness_mean_score = opt_field<double>(j, "flatness_mean_score");
    r.entropy_bits = opt_field<double>(j, "entropy_bits");
    r.character = opt_field<bool>(j, "character").value_or(false);
    r.person_detected = opt_field<bool>(j, "person_detected");
    r.nsfw_flagged = opt_field<bool>(j, "nsfw_flagged");
    r.caption_en = opt_field<std::string>(j, "caption_en");
    r.caption_zh = opt_field<std::string>(j, "caption_zh");
    r.content_hash = opt_field<std::string>(j, "content_hash");
    r.bucket_width = opt_field<int>(j, "bucket_width");
    r.bucket_height = opt_field<int>(j, "bucket_height");
    r.crop_x = opt_field<std::int64_t>(j, "crop_x");
    r.crop_y = opt_field<std::int64_t>(j, "crop_y");
    r.crop_width = opt_field<std::int64_t>(j, "crop_width");
    r.crop_height = opt_field<std::int64_t>(j, "crop_height");

    if (auto it = j.find("filter_trace"); it != j.end() && !it->is_null()) {
        for (const auto& entry : *it) {
            TraceEntry t;
            t.stage = entry.at("stage").get<std::string>();
            t.pass = entry.at("pass").get<bool>();
            t.value = entry.at("value").get<double>();
            r.filter_trace.push_back(std::move(t));
        }
    }

    ordered_json extra = ordered_json::object();
    for (const auto& [key, value] : j.items()) {
        if (kKnownKeys.find(key) == kKnownKeys.end()) {
            extra[key] = value;
        }
    }
    if (!extra.empty()) {
        r.extra_json = extra.dump();
    }
    return r;
}

ordered_json record_to_json(const ImageMetaRecord& r) {
    ordered_json j;
    j["id"] = r.id;
    j["width"] = r.width;
    j["height"] = r.height;

    auto put = [&j](const char* key, const auto& value) {
        if (value.has_value()) {
            j[key] = *value;
        }
    };
    put("path", r.path);
    put("q_align", r.q_align);
    put("artimuse", r.artimuse);
    put("flatness_flag_ratio", r.flatness_flag_ratio);
    put("flatness_mean_score", r.flatness_mean_score);
    put("entropy_bits", r.entropy_bits);
    j["character"] = r.character;
    put("person_detected", r.person_detected);
    put("nsfw_flagged", r.nsfw_flagged);
    put("caption_en", r.caption_en);
    put("caption_zh", r.caption_zh);
    put("content_hash", r.content_hash);
    put("bucket_width", r.bucket_width);
    put("bucket_height", r.bucket_height);
    put("crop_x", r.crop_x);
    put("crop_y", r.crop_y);
    put("crop_width", r.crop_width);
    put("crop_height", r.crop_height);

    if (!r.filter_trace.empty()) {
        ordered_json trace = ordered_json::array();
        for (const TraceEntry& t : r.filter_trace) {
            trace.push_back({{"stage", t.stage}, {"pass", t.pass}, {"value", t.value}});
        }
        j["filter_trace"] = std::move(trace);
    }

    if (!r.extra_json.empty()) {
        const ordered_json extra = ordered_json::parse(r.extra_json);
        for (const auto& [key, value] : extra.items()) {
            j[key] = value;
        }
    }
    return j;
}

std::string record_to_line(const ImageMetaRecord& record) {
    return record_to_json(record).dump();
}

ImageMetaRecord record_from_line(const std::string& line) {
    return record_from_json(json::parse(line));
}

std::vector<ImageMetaRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open manifest: " + path.string());
    }
    std::vector<ImageMetaRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            records.push_back(record_from_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return records;
}

void write_manifest(const std::filesystem::path& path,
                    std::span<const ImageMetaRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write manifest: " + path.string());
    }
    for (const ImageMetaRecord& r : records) {
        out << record_to_line(r) << '\n';
    }
}

std::vector<std::size_t> rank_top_by_artimuse(std::span<const ImageMetaRecord> records,
                                              double percentile) {
    if (!(percentile > 0.0 && percentile <= 100.0)) {
        throw std::invalid_argument("rank_top_by_artimuse: percentile must be in (0, 100]");
    }
    for (const ImageMetaRecord& r : records) {
        if (!r.artimuse.has_value()) {
            throw std::invalid_argument("rank_top_by_artimuse: record '" + r.id +
                                        "' has no artimuse score");
        }
    }

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&records](std::size_t a, std::size_t b) {
        const double sa = *records[a].artimuse;
        const double sb = *records[b].artimuse;
        if (sa != sb) {
            return sa > sb;
        }
        return records[a].id < records[b].id;
    });

    // Multiply before dividing so integer-valued percentiles stay exact
    // (5 * 10000 / 100 == 500, while 0.05 * 10000 rounds past it).
    const std::size_t keep = records.empty()
        ? 0
        : static_cast<std::size_t>(
              std::ceil(percentile * static_cast<double>(records.size()) / 100.0));
    order.resize(std::min(keep, order.size()));
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace dit4k
