#include "dit4k/curation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace dit4k::curation {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

// ---------------------------------------------------------------------------
// Per-image filters
// ---------------------------------------------------------------------------

bool resolution_gate(const ImageMetaRecord& record, std::int64_t min_pixels) {
    require(record.width > 0 && record.height > 0,
            "resolution_gate: record '" + record.id + "' has no dimensions");
    return record.pixel_count() >= min_pixels;
}

FlatnessResult flatness_filter(const GrayImage& image, const FlatnessConfig& cfg) {
    require(cfg.patch > 0, "flatness_filter: patch size must be positive");
    require(image.width > 0 && image.height > 0, "flatness_filter: empty image");

    const int tiles_x = image.width / cfg.patch;
    const int tiles_y = image.height / cfg.patch;

    FlatnessResult result;
    result.patches_total = tiles_x * tiles_y;
    if (result.patches_total == 0) {
        // Image smaller than one tile: nothing to evaluate, nothing flagged.
        return result;
    }

    const int n = cfg.patch * cfg.patch;
    double score_sum = 0.0;
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            const int x0 = tx * cfg.patch;
            const int y0 = ty * cfg.patch;
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int y = y0; y < y0 + cfg.patch; ++y) {
                const int ym = clampi(y - 1, 0, image.height - 1);
                const int yp = clampi(y + 1, 0, image.height - 1);
                for (int x = x0; x < x0 + cfg.patch; ++x) {
                    const int xm = clampi(x - 1, 0, image.width - 1);
                    const int xp = clampi(x + 1, 0, image.width - 1);
                    // 3x3 Sobel with replicated borders.
                    const double gx = (image.at(xp, ym) + 2.0 * image.at(xp, y) +
                                       image.at(xp, yp)) -
                                      (image.at(xm, ym) + 2.0 * image.at(xm, y) +
                                       image.at(xm, yp));
                    const double gy = (image.at(xm, yp) + 2.0 * image.at(x, yp) +
                                       image.at(xp, yp)) -
                                      (image.at(xm, ym) + 2.0 * image.at(x, ym) +
                                       image.at(xp, ym));
                    const double mag = std::sqrt(gx * gx + gy * gy);
                    sum += mag;
                    sum_sq += mag * mag;
                }
            }
            const double mean = sum / n;
            const double variance = sum_sq / n - mean * mean;  // population variance
            score_sum += variance;
            if (variance < cfg.score_threshold) {
                ++result.patches_flagged;
            }
        }
    }

    result.flag_ratio =
        static_cast<double>(result.patches_flagged) / result.patches_total;
    result.mean_patch_score = score_sum / result.patches_total;
    result.pass = !(result.flag_ratio > cfg.max_flagged_ratio);  // strictly-greater fails
    return result;
}

EntropyResult entropy_filter(const GrayImage& image, double min_bits) {
    require(image.width > 0 && image.height > 0, "entropy_filter: empty image");
    std::array<std::uint64_t, 256> histogram{};
    for (std::uint8_t v : image.pixels) {
        ++histogram[v];
    }
    const double total = static_cast<double>(image.pixels.size());
    double bits = 0.0;
    for (std::uint64_t count : histogram) {
        if (count > 0) {
            const double p = static_cast<double>(count) / total;
            bits -= p * std::log2(p);
        }
    }
    EntropyResult result;
    result.bits = bits;
    result.pass = !(bits < min_bits);  // strictly-below fails
    return result;
}

bool qalign_pass(double score, double min_exclusive) {
    return score > min_exclusive;
}

// ---------------------------------------------------------------------------
// Corpus-level operations
// ---------------------------------------------------------------------------

DedupResult dedup(std::span<const ImageMetaRecord> records) {
    // hash -> index of the lowest-id record seen so far
    std::map<std::string, std::size_t> best;
    for (std::size_t i = 0; i < records.size(); ++i) {
        require(records[i].content_hash.has_value() && !records[i].content_hash->empty(),
                "dedup: record '" + records[i].id + "' has no content_hash");
        auto [it, inserted] = best.emplace(*records[i].content_hash, i);
        if (!inserted && records[i].id < records[it->second].id) {
            it->second = i;
        }
    }
    DedupResult result;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (best.at(*records[i].content_hash) == i) {
            result.kept.push_back(i);
        } else {
            result.removed.push_back(i);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Aspect-ratio bucketing
// ---------------------------------------------------------------------------

BucketGroup bucket_group(const Bucket& bucket) {
    if (bucket.width > bucket.height) {
        return BucketGroup::kLandscape;
    }
    if (bucket.width < bucket.height) {
        return BucketGroup::kPortrait;
    }
    return BucketGroup::kSquare;
}

void BucketSet::validate() const {
    require(!buckets.empty(), "BucketSet: empty bucket list");
    for (const Bucket& b : buckets) {
        require(b.width > 0 && b.height > 0 && b.width % 2 == 0 && b.height % 2 == 0,
                "BucketSet: bucket dimensions must be positive and even");
    }
}

BucketSet BucketSet::default_set() {
    return BucketSet{{
        // landscape
        {5440, 3072}, {5184, 3264}, {4992, 3328}, {4736, 3520}, {5824, 2880},
        {6272, 2688}, {5568, 3008}, {6336, 2624}, {5632, 3008}, {4608, 3648},
        // portrait
        {3072, 5440}, {3648, 4608}, {3520, 4736}, {3328, 4992},
        // square
        {4096, 4096},
    }};
}

CropPlan bucket_assign(int width, int height, const BucketSet& buckets) {
    require(width > 0 && height > 0, "bucket_assign: dimensions must be positive");
    buckets.validate();

    const double log_ar = std::log(static_cast<double>(width) / height);
    int best_index = -1;
    double best_distance = 0.0;
    for (std::size_t i = 0; i < buckets.buckets.size(); ++i) {
        const Bucket& b = buckets.buckets[i];
        const double distance =
            std::abs(log_ar - std::log(static_cast<double>(b.width) / b.height));
        if (best_index < 0 || distance < best_distance) {
            best_index = static_cast<int>(i);
            best_distance = distance;
            continue;
        }
        if (distance == best_distance) {
            const Bucket& current = buckets.buckets[best_index];
            const std::int64_t p_new = static_cast<std::int64_t>(b.width) * b.height;
            const std::int64_t p_cur =
                static_cast<std::int64_t>(current.width) * current.height;
            if (p_new > p_cur) {
                best_index = static_cast<int>(i);
            }
        }
    }

    const Bucket chosen = buckets.buckets[best_index];
    // Exact-ratio crops are integer multiples of the reduced width:height unit.
    const int g = std::gcd(chosen.width, chosen.height);
    const int unit_w = chosen.width / g;
    const int unit_h = chosen.height / g;
    const std::int64_t k = std::min<std::int64_t>(width / unit_w, height / unit_h);
    require(k >= 1, "bucket_assign: source " + std::to_string(width) + "x" +
                        std::to_string(height) + " cannot fit an exact-ratio crop of bucket " +
                        std::to_string(chosen.width) + "x" + std::to_string(chosen.height));

    CropPlan plan;
    plan.bucket = chosen;
    plan.bucket_index = best_index;
    plan.crop_width = k * unit_w;
    plan.crop_height = k * unit_h;
    plan.crop_x = (width - plan.crop_width) / 2;
    plan.crop_y = (height - plan.crop_height) / 2;
    return plan;
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

const std::vector<std::string> kStageOrder = {
    "resolution", "flatness", "entropy", "q_align", "artimuse",
    "dedup", "character", "bucket",
};

namespace {

enum class RecordState { kAlive, kDropped, kPending, kQuarantined };

struct RecordProgress {
    RecordState state = RecordState::kAlive;
    std::string quarantine_stage;
    std::string quarantine_reason;
    // Stage outcomes for retention accounting, keyed by stage name.
    std::vector<std::pair<std::string, bool>> outcomes;
};

void append_trace(ImageMetaRecord& record, const std::string& stage, bool pass, double value) {
    record.filter_trace.push_back(TraceEntry{stage, pass, value});
}

// Runs the per-image stages for one record. Decoding happens at most once.
void per_image_pass(ImageMetaRecord& record, RecordProgress& progress,
                    const PipelineConfig& cfg) {
    GrayImage image;
    bool decoded = false;
    auto ensure_decoded = [&]() -> GrayImage& {
        if (!decoded) {
            if (!record.path.has_value()) {
                throw std::runtime_error("no image path");
            }
            image = decode_gray(cfg.image_root / *record.path);
            decoded = true;
        }
        return image;
    };

    const char* current_stage = "resolution";
    try {
        if (cfg.enable_resolution) {
            const bool pass = resolution_gate(record, cfg.min_pixels);
            append_trace(record, "resolution", pass,
                         static_cast<double>(record.pixel_count()));
            progress.outcomes.emplace_back("resolution", pass);
            if (!pass) {
                progress.state = RecordState::kDropped;
                return;
            }
        }

        if (cfg.enable_flatness) {
            current_stage = "flatness";
            double ratio = 0.0;
            if (cfg.prefer_metadata && record.flatness_flag_ratio.has_value()) {
                ratio = *record.flatness_flag_ratio;
            } else {
                const FlatnessResult fr = flatness_filter(ensure_decoded(), cfg.flatness);
                ratio = fr.flag_ratio;
                record.flatness_flag_ratio = fr.flag_ratio;
                record.flatness_mean_score = fr.mean_patch_score;
            }
            const bool pass = !(ratio > cfg.flatness.max_flagged_ratio);
            append_trace(record, "flatness", pass, ratio);
            progress.outcomes.emplace_back("flatness", pass);
            if (!pass) {
                progress.state = RecordState::kDropped;
                return;
            }
        }

        if (cfg.enable_entropy) {
            current_stage = "entropy";
            double bits = 0.0;
            if (cfg.prefer_metadata && record.entropy_bits.has_value()) {
                bits = *record.entropy_bits;
            } else {
                bits = entropy_filter(ensure_decoded(), cfg.entropy_min_bits).bits;
                record.entropy_bits = bits;
            }
            const bool pass = !(bits < cfg.entropy_min_bits);
            append_trace(record, "entropy", pass, bits);
            progress.outcomes.emplace_back("entropy", pass);
            if (!pass) {
                progress.state = RecordState::kDropped;
                return;
            }
        }

        if (cfg.enable_qalign) {
            current_stage = "q_align";
            if (!record.q_align.has_value()) {
                progress.state = RecordState::kPending;
                return;
            }
            const bool pass = qalign_pass(*record.q_align, cfg.qalign_min);
            append_trace(record, "q_align", pass, *record.q_align);
            progress.outcomes.emplace_back("q_align", pass);
            if (!pass) {
                progress.state = RecordState::kDropped;
                return;
            }
        }

        // The dedup barrier needs a hash; compute it here, in parallel, while
        // the file may already be warm in the page cache.
        if (cfg.enable_dedup && !record.content_hash.has_value()) {
            current_stage = "dedup";
            if (!record.path.has_value()) {
                throw std::runtime_error("no content hash and no file to hash");
            }
            record.content_hash = sha256_file(cfg.image_root / *record.path);
        }
    } catch (const std::exception& e) {
        progress.state = RecordState::kQuarantined;
        progress.quarantine_stage = current_stage;
        progress.quarantine_reason = e.what();
    }
}

}  // namespace

PipelineResult run_pipeline(std::vector<ImageMetaRecord> records, const PipelineConfig& cfg) {
    cfg.buckets.validate();
    require(cfg.workers >= 1, "run_pipeline: workers must be >= 1");

    std::vector<RecordProgress> progress(records.size());

    // Phase 1: per-image stages, embarrassingly parallel.
    {
        std::atomic<std::size_t> next{0};
        const int worker_count =
            static_cast<int>(std::min<std::size_t>(cfg.workers, std::max<std::size_t>(records.size(), 1)));
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&records, &progress, &cfg, &next]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= records.size()) {
                        return;
                    }
                    per_image_pass(records[i], progress[i], cfg);
                }
            });
        }
        for (std::thread& t : workers) {
            t.join();
        }
    }

    PipelineResult result;

    // Phase 2: corpus barriers, input order preserved throughout.
    auto alive_indices = [&]() {
        std::vector<std::size_t> alive;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (progress[i].state == RecordState::kAlive) {
                alive.push_back(i);
            }
        }
        return alive;
    };

    if (cfg.enable_artimuse) {
        std::vector<std::size_t> scored;
        for (std::size_t i : alive_indices()) {
            if (!records[i].artimuse.has_value()) {
                progress[i].state = RecordState::kPending;
            } else {
                scored.push_back(i);
            }
        }
        std::vector<ImageMetaRecord> scored_records;
        scored_records.reserve(scored.size());
        for (std::size_t i : scored) {
            scored_records.push_back(records[i]);
        }
        const std::vector<std::size_t> kept =
            rank_top_by_artimuse(scored_records, cfg.artimuse_percentile);
        std::vector<bool> keep_flag(scored.size(), false);
        for (std::size_t k : kept) {
            keep_flag[k] = true;
        }
        for (std::size_t j = 0; j < scored.size(); ++j) {
            const std::size_t i = scored[j];
            append_trace(records[i], "artimuse", keep_flag[j], *records[i].artimuse);
            progress[i].outcomes.emplace_back("artimuse", keep_flag[j]);
            if (!keep_flag[j]) {
                progress[i].state = RecordState::kDropped;
            }
        }
    }

    if (cfg.enable_dedup) {
        const std::vector<std::size_t> alive = alive_indices();
        std::vector<ImageMetaRecord> alive_records;
        alive_records.reserve(alive.size());
        for (std::size_t i : alive) {
            alive_records.push_back(records[i]);
        }
        std::map<std::string, std::size_t> group_size;
        for (const ImageMetaRecord& r : alive_records) {
            ++group_size[r.content_hash.value_or("")];
        }
        const DedupResult dd = dedup(alive_records);
        std::vector<bool> keep_flag(alive.size(), false);
        for (std::size_t k : dd.kept) {
            keep_flag[k] = true;
        }
        for (std::size_t j = 0; j < alive.size(); ++j) {
            const std::size_t i = alive[j];
            const double value =
                static_cast<double>(group_size[records[i].content_hash.value_or("")]);
            append_trace(records[i], "dedup", keep_flag[j], value);
            progress[i].outcomes.emplace_back("dedup", keep_flag[j]);
            if (!keep_flag[j]) {
                progress[i].state = RecordState::kDropped;
                ++result.duplicates_removed;
            }
        }
    }

    if (cfg.enable_character) {
        for (std::size_t i : alive_indices()) {
            records[i].character =
                records[i].character || records[i].person_detected.value_or(false);
            append_trace(records[i], "character", true, records[i].character ? 1.0 : 0.0);
            progress[i].outcomes.emplace_back("character", true);
        }
    }

    if (cfg.enable_bucket) {
        for (std::size_t i : alive_indices()) {
            try {
                const CropPlan plan =
                    bucket_assign(records[i].width, records[i].height, cfg.buckets);
                records[i].bucket_width = plan.bucket.width;
                records[i].bucket_height = plan.bucket.height;
                records[i].crop_x = plan.crop_x;
                records[i].crop_y = plan.crop_y;
                records[i].crop_width = plan.crop_width;
                records[i].crop_height = plan.crop_height;
                append_trace(records[i], "bucket", true,
                             static_cast<double>(plan.bucket_index));
                progress[i].outcomes.emplace_back("bucket", true);
            } catch (const std::exception& e) {
                progress[i].state = RecordState::kQuarantined;
                progress[i].quarantine_stage = "bucket";
                progress[i].quarantine_reason = e.what();
            }
        }
    }

    // Retention accounting over the canonical stage order.
    for (const std::string& stage : kStageOrder) {
        StageCount count;
        count.stage = stage;
        bool enabled = false;
        for (const RecordProgress& p : progress) {
            for (const auto& [name, pass] : p.outcomes) {
                if (name == stage) {
                    enabled = true;
                    ++count.entered;
                    if (pass) {
                        ++count.survived;
                    }
                }
            }
        }
        if (enabled) {
            result.retention.push_back(std::move(count));
        }
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        switch (progress[i].state) {
            case RecordState::kAlive:
                result.curated.push_back(std::move(records[i]));
                break;
            case RecordState::kPending:
                result.pending.push_back(std::move(records[i]));
                break;
            case RecordState::kQuarantined:
                result.quarantined.push_back(QuarantinedRecord{std::move(records[i]),
                                                               progress[i].quarantine_stage,
                                                               progress[i].quarantine_reason});
                break;
            case RecordState::kDropped:
                result.dropped.push_back(std::move(records[i]));
                break;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Corpus audit
// ---------------------------------------------------------------------------

namespace {

Quantiles quantiles_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    auto at_fraction = [&values](double p) {
        // Linear interpolation between closest ranks.
        const double h = p * (static_cast<double>(values.size()) - 1.0);
        const std::size_t lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    Quantiles q;
    q.min = values.front();
    q.p25 = at_fraction(0.25);
    q.p50 = at_fraction(0.50);
    q.p75 = at_fraction(0.75);
    q.max = values.back();
    return q;
}

}  // namespace

AuditReport audit_report(std::span<const ImageMetaRecord> records, const BucketSet& buckets,
                         int log_ar_bins) {
    require(!records.empty(), "audit_report: empty manifest");
    require(log_ar_bins >= 1, "audit_report: need at least one bin");
    buckets.validate();

    AuditReport report;
    report.record_count = records.size();
    report.buckets = buckets;
    report.bucket_counts.assign(buckets.buckets.size(), 0);

    std::vector<double> log_ars, widths, heights, megapixels;
    log_ars.reserve(records.size());
    for (const ImageMetaRecord& r : records) {
        require(r.width > 0 && r.height > 0,
                "audit_report: record '" + r.id + "' has no dimensions");
        log_ars.push_back(std::log(static_cast<double>(r.width) / r.height));
        widths.push_back(r.width);
        heights.push_back(r.height);
        megapixels.push_back(static_cast<double>(r.pixel_count()) / 1e6);
    }

    double radius = 0.0;
    for (double v : log_ars) {
        radius = std::max(radius, std::abs(v));
    }
    if (radius == 0.0) {
        radius = std::log(2.0);  // degenerate all-square corpus, pick a display range
    }
    report.log_ar_edges.resize(log_ar_bins + 1);
    for (int i = 0; i <= log_ar_bins; ++i) {
        report.log_ar_edges[i] = -radius + 2.0 * radius * i / log_ar_bins;
    }
    report.log_ar_counts.assign(log_ar_bins, 0);
    for (double v : log_ars) {
        int bin = static_cast<int>((v + radius) / (2.0 * radius) * log_ar_bins);
        bin = clampi(bin, 0, log_ar_bins - 1);
        ++report.log_ar_counts[bin];
    }

    report.width_q = quantiles_of(widths);
    report.height_q = quantiles_of(heights);
    report.megapixel_q = quantiles_of(megapixels);

    for (const ImageMetaRecord& r : records) {
        try {
            const CropPlan plan = bucket_assign(r.width, r.height, buckets);
            ++report.bucket_counts[plan.bucket_index];
        } catch (const std::exception&) {
            // Sources too small for an exact-ratio crop are left uncounted.
        }
    }
    return report;
}

}  // namespace dit4k::curation
