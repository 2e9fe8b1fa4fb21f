#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dit4k {

// One pass/fail observation appended by a pipeline stage. `value` is the
// measured quantity the decision was made on (pixel count, flag ratio,
// entropy bits, score, ...).
struct TraceEntry {
    std::string stage;
    bool pass = false;
    double value = 0.0;
};

// One curation-pipeline row. External model scores (q_align, artimuse) and
// detector flags are ingested as metadata; this tool never runs those models.
// Classical signals (flatness, entropy, content hash) are either ingested or
// computed from pixels. Unknown manifest fields are preserved verbatim.
struct ImageMetaRecord {
    std::string id;
    int width = 0;
    int height = 0;
    std::optional<std::string> path;  // image file, relative to the manifest root

    std::optional<double> q_align;
    std::optional<double> artimuse;
    std::optional<double> flatness_flag_ratio;   // in [0, 1]
    std::optional<double> flatness_mean_score;   // mean patch gradient variance
    std::optional<double> entropy_bits;
    bool character = false;
    std::optional<bool> person_detected;  // open-vocabulary detector evidence
    std::optional<bool> nsfw_flagged;     // upstream safety screen result

    std::optional<std::string> caption_en;
    std::optional<std::string> caption_zh;
    std::optional<std::string> content_hash;  // lowercase hex sha-256

    std::vector<TraceEntry> filter_trace;

    // Assigned by the bucketing stage.
    std::optional<int> bucket_width;
    std::optional<int> bucket_height;
    std::optional<std::int64_t> crop_x, crop_y, crop_width, crop_height;

    // Unrecognized manifest keys, kept for round-tripping.
    std::string extra_json;  // serialized JSON object, empty if none

    std::int64_t pixel_count() const {
        return static_cast<std::int64_t>(width) * height;
    }
};

ImageMetaRecord record_from_json(const nlohmann::json& j);
nlohmann::ordered_json record_to_json(const ImageMetaRecord& record);

// JSON Lines manifest: one record per line, blank lines ignored. Parse errors
// carry the 1-based line number.
std::vector<ImageMetaRecord> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    std::span<const ImageMetaRecord> records);

std::string record_to_line(const ImageMetaRecord& record);
ImageMetaRecord record_from_line(const std::string& line);

// Indices of the ceil(percentile/100 * n) records with the highest ArtiMuse
// scores, ties broken by ascending id; the result preserves input order.
// Throws if any record is missing the score.
std::vector<std::size_t> rank_top_by_artimuse(std::span<const ImageMetaRecord> records,
                                              double percentile);

}  // namespace dit4k
