#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dit4k/image.hpp"
#include "dit4k/manifest.hpp"

namespace dit4k::curation {

// ---------------------------------------------------------------------------
// Per-image classical filters
// ---------------------------------------------------------------------------

// Pixel-count gate: pass iff width*height >= min_pixels. Native aspect ratio
// is never touched.
constexpr std::int64_t kMinPixels4K = 3840LL * 2160;  // 8,294,400

bool resolution_gate(const ImageMetaRecord& record, std::int64_t min_pixels = kMinPixels4K);

// Flat-region detection: the image is tiled into non-overlapping patch x patch
// squares (right/bottom remainders that do not fit a full tile are skipped).
// Each patch is scored with the population variance of the 3x3 Sobel gradient
// magnitude sqrt(gx^2 + gy^2) over its interior, computed in double precision
// on 8-bit luma. Patches scoring below score_threshold are flagged; the image
// fails iff flagged/total is strictly greater than max_flagged_ratio.
struct FlatnessConfig {
    int patch = 240;
    double score_threshold = 800.0;
    double max_flagged_ratio = 0.5;
};

struct FlatnessResult {
    int patches_total = 0;
    int patches_flagged = 0;
    double flag_ratio = 0.0;
    double mean_patch_score = 0.0;
    bool pass = true;
};

FlatnessResult flatness_filter(const GrayImage& image, const FlatnessConfig& cfg = {});

// Shannon entropy of the 256-bin luma histogram, in bits. Fails iff strictly
// below min_bits.
struct EntropyResult {
    double bits = 0.0;
    bool pass = true;
};

EntropyResult entropy_filter(const GrayImage& image, double min_bits = 7.0);

// Semantic-quality gate on an ingested score: pass iff strictly greater.
bool qalign_pass(double score, double min_exclusive = 4.0);

// ---------------------------------------------------------------------------
// Corpus-level operations
// ---------------------------------------------------------------------------

// Exact-byte de-duplication on content_hash: of each duplicate group the
// record with the lowest id survives. Requires every record to carry a hash.
struct DedupResult {
    std::vector<std::size_t> kept;     // input order preserved
    std::vector<std::size_t> removed;
};

DedupResult dedup(std::span<const ImageMetaRecord> records);

// ---------------------------------------------------------------------------
// Aspect-ratio bucketing
// ---------------------------------------------------------------------------

struct Bucket {
    int width = 0;
    int height = 0;
};

enum class BucketGroup { kLandscape, kPortrait, kSquare };

BucketGroup bucket_group(const Bucket& bucket);

struct BucketSet {
    std::vector<Bucket> buckets;
    void validate() const;         // nonempty, positive even dims
    static BucketSet default_set();  // the 15 stock 4K training targets
};

// Center-crop geometry: the largest centered region whose aspect ratio equals
// the bucket's exactly (integer multiples of the reduced w:h unit), followed
// by a resize to the bucket resolution.
struct CropPlan {
    Bucket bucket;
    int bucket_index = 0;
    std::int64_t crop_x = 0, crop_y = 0;
    std::int64_t crop_width = 0, crop_height = 0;
};

// Chooses the bucket minimizing |ln(w/h) - ln(bw/bh)|; ties go to the larger
// bucket pixel count, then to list order.
CropPlan bucket_assign(int width, int height, const BucketSet& buckets);

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

// Canonical stage order; filter_trace entries always appear in this order.
extern const std::vector<std::string> kStageOrder;

struct PipelineConfig {
    std::int64_t min_pixels = kMinPixels4K;
    FlatnessConfig flatness;
    double entropy_min_bits = 7.0;
    double qalign_min = 4.0;
    double artimuse_percentile = 30.0;
    BucketSet buckets = BucketSet::default_set();

    bool enable_resolution = true;
    bool enable_flatness = true;
    bool enable_entropy = true;
    bool enable_qalign = true;
    bool enable_artimuse = true;
    bool enable_dedup = true;
    bool enable_character = true;
    bool enable_bucket = true;

    // Ingested metadata values win over recomputation when present.
    bool prefer_metadata = true;

    int workers = 1;
    std::filesystem::path image_root;  // base for relative record paths
};

struct QuarantinedRecord {
    ImageMetaRecord record;
    std::string stage;
    std::string reason;
};

struct StageCount {
    std::string stage;
    std::size_t entered = 0;
    std::size_t survived = 0;
};

struct PipelineResult {
    std::vector<ImageMetaRecord> curated;
    std::vector<ImageMetaRecord> dropped;  // failed a filter; trace says which
    std::vector<ImageMetaRecord> pending;  // waiting on external scores
    std::vector<QuarantinedRecord> quarantined;
    std::vector<StageCount> retention;
    std::size_t duplicates_removed = 0;
};

// Stages run in kStageOrder; per-image stages are evaluated in parallel across
// `workers` threads, corpus stages (artimuse rank, dedup) as barriers. Records
// that cannot be evaluated (unreadable image, missing hash source) are
// quarantined with a reason; records missing an external score at a score
// stage go to `pending`. Output order follows input order everywhere, so a
// rerun on identical input is byte-identical.
PipelineResult run_pipeline(std::vector<ImageMetaRecord> records, const PipelineConfig& cfg);

// ---------------------------------------------------------------------------
// Corpus audit
// ---------------------------------------------------------------------------

struct Quantiles {
    double min = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, max = 0.0;
};

struct AuditReport {
    std::size_t record_count = 0;
    // Symmetric ln(width/height) histogram; odd bin count keeps square ARs in
    // the exact center bin.
    std::vector<double> log_ar_edges;
    std::vector<std::uint64_t> log_ar_counts;
    Quantiles width_q, height_q, megapixel_q;
    std::vector<std::uint64_t> bucket_counts;  // aligned with the bucket set
    BucketSet buckets;
};

AuditReport audit_report(std::span<const ImageMetaRecord> records, const BucketSet& buckets,
                         int log_ar_bins = 33);

}  // namespace dit4k::curation
