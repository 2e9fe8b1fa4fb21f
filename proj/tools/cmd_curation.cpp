#include <iostream>
#include <memory>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "dit4k/curation.hpp"
#include "dit4k/manifest.hpp"

namespace dit4k::tools {

namespace {

using namespace dit4k::curation;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// curate
// ---------------------------------------------------------------------------

struct CurateOptions {
    std::string manifest_path;
    std::string output_dir = ".";
    std::string quarantine_dir;  // default: <output-dir>/quarantine
    std::string image_root;      // default: manifest's directory
    int workers = 0;             // 0: from config/global
    std::uint64_t seed = 0;      // accepted for interface uniformity; the
                                 // pipeline itself is deterministic
    double min_pixels = -1.0;
    int flat_patch = -1;
    double flat_threshold = -1.0;
    double flat_ratio = -1.0;
    double entropy_min = -1.0;
    double qalign_min = -1.0;
    double artimuse_percentile = -1.0;
    std::vector<std::string> skip_stages;
};

PipelineConfig resolve_pipeline_config(const CurateOptions& opt, ToolContext& ctx) {
    PipelineConfig cfg;
    if (ctx.config().curation.has_value()) {
        cfg = *ctx.config().curation;
    }
    if (ctx.config().global.workers > 1 && cfg.workers <= 1) {
        cfg.workers = ctx.config().global.workers;
    }

    if (opt.min_pixels >= 0.0) cfg.min_pixels = static_cast<std::int64_t>(opt.min_pixels);
    if (opt.flat_patch > 0) cfg.flatness.patch = opt.flat_patch;
    if (opt.flat_threshold >= 0.0) cfg.flatness.score_threshold = opt.flat_threshold;
    if (opt.flat_ratio >= 0.0) cfg.flatness.max_flagged_ratio = opt.flat_ratio;
    if (opt.entropy_min >= 0.0) cfg.entropy_min_bits = opt.entropy_min;
    if (opt.qalign_min >= 0.0) cfg.qalign_min = opt.qalign_min;
    if (opt.artimuse_percentile > 0.0) cfg.artimuse_percentile = opt.artimuse_percentile;
    if (opt.workers > 0) cfg.workers = opt.workers;

    for (const std::string& stage : opt.skip_stages) {
        if (stage == "resolution") cfg.enable_resolution = false;
        else if (stage == "flatness") cfg.enable_flatness = false;
        else if (stage == "entropy") cfg.enable_entropy = false;
        else if (stage == "q_align") cfg.enable_qalign = false;
        else if (stage == "artimuse") cfg.enable_artimuse = false;
        else if (stage == "dedup") cfg.enable_dedup = false;
        else if (stage == "character") cfg.enable_character = false;
        else if (stage == "bucket") cfg.enable_bucket = false;
        else throw std::runtime_error("curate: unknown stage in --skip: '" + stage + "'");
    }

    if (!opt.image_root.empty()) {
        cfg.image_root = opt.image_root;
    } else if (cfg.image_root.empty() || cfg.image_root == ".") {
        cfg.image_root = std::filesystem::path(opt.manifest_path).parent_path();
    }
    return cfg;
}

ordered_json retention_to_json(const PipelineResult& result, std::size_t input_count) {
    ordered_json stages = ordered_json::array();
    for (const StageCount& count : result.retention) {
        stages.push_back({{"stage", count.stage},
                          {"entered", count.entered},
                          {"survived", count.survived}});
    }
    ordered_json j;
    j["input_records"] = input_count;
    j["curated"] = result.curated.size();
    j["dropped"] = result.dropped.size();
    j["pending_scores"] = result.pending.size();
    j["quarantined"] = result.quarantined.size();
    j["duplicates_removed"] = result.duplicates_removed;
    j["stage_retention"] = std::move(stages);
    return j;
}

void run_curate(const CurateOptions& opt, ToolContext& ctx) {
    const PipelineConfig cfg = resolve_pipeline_config(opt, ctx);
    const auto out_dir = ensure_output_dir(opt.output_dir);
    const auto quarantine_dir = ensure_output_dir(
        opt.quarantine_dir.empty() ? (out_dir / "quarantine").string() : opt.quarantine_dir);

    std::vector<ImageMetaRecord> records = read_manifest(opt.manifest_path);
    const std::size_t input_count = records.size();
    PipelineResult result = run_pipeline(std::move(records), cfg);

    write_manifest(out_dir / "curated.jsonl", result.curated);
    write_manifest(out_dir / "dropped.jsonl", result.dropped);
    write_manifest(out_dir / "pending.jsonl", result.pending);
    {
        std::ofstream q(quarantine_dir / "quarantined.jsonl", std::ios::binary);
        for (const QuarantinedRecord& qr : result.quarantined) {
            ordered_json j = record_to_json(qr.record);
            j["quarantine_stage"] = qr.stage;
            j["quarantine_reason"] = qr.reason;
            q << j.dump() << '\n';
        }
    }
    {
        std::ofstream report(out_dir / "curation_report.json");
        report << retention_to_json(result, input_count).dump(2) << "\n";
    }

    if (ctx.config().global.log_level != "quiet") {
        std::cout << "curate: " << input_count << " in, " << result.curated.size()
                  << " curated, " << result.dropped.size() << " dropped, "
                  << result.pending.size() << " pending scores, "
                  << result.quarantined.size() << " quarantined, "
                  << result.duplicates_removed << " duplicates removed\n";
    }
    if (!result.quarantined.empty()) {
        ctx.exit_code = 2;  // partial: some records could not be evaluated
    }
}

// ---------------------------------------------------------------------------
// bucket
// ---------------------------------------------------------------------------

struct BucketOptions {
    int width = 0;
    int height = 0;
    std::string manifest_path;
    std::string output_dir = ".";
};

ordered_json crop_plan_to_json(const CropPlan& plan) {
    ordered_json j;
    j["bucket_width"] = plan.bucket.width;
    j["bucket_height"] = plan.bucket.height;
    j["bucket_index"] = plan.bucket_index;
    j["crop_x"] = plan.crop_x;
    j["crop_y"] = plan.crop_y;
    j["crop_width"] = plan.crop_width;
    j["crop_height"] = plan.crop_height;
    return j;
}

void run_bucket(const BucketOptions& opt, ToolContext& ctx) {
    BucketSet buckets = BucketSet::default_set();
    if (ctx.config().curation.has_value()) {
        buckets = ctx.config().curation->buckets;
    }

    if (!opt.manifest_path.empty()) {
        const auto out_dir = ensure_output_dir(opt.output_dir);
        const auto records = read_manifest(opt.manifest_path);
        std::ofstream out(out_dir / "bucket_plans.jsonl", std::ios::binary);
        for (const ImageMetaRecord& r : records) {
            ordered_json j;
            j["id"] = r.id;
            j["width"] = r.width;
            j["height"] = r.height;
            try {
                const CropPlan plan = bucket_assign(r.width, r.height, buckets);
                j.update(crop_plan_to_json(plan));
            } catch (const std::exception& e) {
                j["error"] = e.what();
            }
            out << j.dump() << '\n';
        }
        return;
    }

    if (opt.width <= 0 || opt.height <= 0) {
        throw std::runtime_error("bucket: provide --width and --height, or --manifest");
    }
    const CropPlan plan = bucket_assign(opt.width, opt.height, buckets);
    std::cout << crop_plan_to_json(plan).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditOptions {
    std::string manifest_path;
    std::string output_dir = ".";
    int bins = 33;
};

void run_audit(const AuditOptions& opt, ToolContext& ctx) {
    BucketSet buckets = BucketSet::default_set();
    if (ctx.config().curation.has_value()) {
        buckets = ctx.config().curation->buckets;
    }
    const auto out_dir = ensure_output_dir(opt.output_dir);
    const auto records = read_manifest(opt.manifest_path);
    const AuditReport report = audit_report(records, buckets, opt.bins);

    ordered_json j;
    j["record_count"] = report.record_count;
    auto quantiles = [](const Quantiles& q) {
        return ordered_json{{"min", q.min}, {"p25", q.p25}, {"p50", q.p50},
                            {"p75", q.p75}, {"max", q.max}};
    };
    j["width"] = quantiles(report.width_q);
    j["height"] = quantiles(report.height_q);
    j["megapixels"] = quantiles(report.megapixel_q);
    {
        ordered_json hist;
        hist["edges"] = report.log_ar_edges;
        hist["counts"] = report.log_ar_counts;
        j["log_aspect_ratio"] = std::move(hist);
    }
    {
        ordered_json counts = ordered_json::array();
        for (std::size_t i = 0; i < report.buckets.buckets.size(); ++i) {
            counts.push_back({{"width", report.buckets.buckets[i].width},
                              {"height", report.buckets.buckets[i].height},
                              {"count", report.bucket_counts[i]}});
        }
        j["buckets"] = std::move(counts);
    }
    std::ofstream json_out(out_dir / "audit.json");
    json_out << j.dump(2) << "\n";

    {
        CsvWriter csv(out_dir / "audit_log_ar.csv");
        for (const char* column : {"bin_low", "bin_high", "count"}) {
            csv.cell(std::string(column));
        }
        csv.end_row();
        for (std::size_t i = 0; i < report.log_ar_counts.size(); ++i) {
            csv.cell(report.log_ar_edges[i]);
            csv.cell(report.log_ar_edges[i + 1]);
            csv.cell(static_cast<std::int64_t>(report.log_ar_counts[i]));
            csv.end_row();
        }
    }
    {
        CsvWriter csv(out_dir / "audit_buckets.csv");
        for (const char* column : {"bucket_width", "bucket_height", "count"}) {
            csv.cell(std::string(column));
        }
        csv.end_row();
        for (std::size_t i = 0; i < report.buckets.buckets.size(); ++i) {
            csv.cell(static_cast<std::int64_t>(report.buckets.buckets[i].width));
            csv.cell(static_cast<std::int64_t>(report.buckets.buckets[i].height));
            csv.cell(static_cast<std::int64_t>(report.bucket_counts[i]));
            csv.end_row();
        }
    }
}

}  // namespace

void register_curate(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<CurateOptions>();
    CLI::App* cmd = app.add_subcommand(
        "curate", "Run the full curation pipeline over a JSONL manifest");
    cmd->add_option("--manifest", opt->manifest_path, "Input JSONL manifest")->required();
    cmd->add_option("--output-dir", opt->output_dir, "Output directory")
        ->capture_default_str();
    cmd->add_option("--quarantine-dir", opt->quarantine_dir,
                    "Where quarantined records go (default: <output-dir>/quarantine)");
    cmd->add_option("--image-root", opt->image_root,
                    "Base directory for record paths (default: the manifest's directory)");
    cmd->add_option("--workers", opt->workers, "Worker threads for per-image stages");
    cmd->add_option("--seed", opt->seed, "Accepted for uniformity; output is deterministic");
    cmd->add_option("--min-pixels", opt->min_pixels, "Resolution gate threshold");
    cmd->add_option("--flat-patch", opt->flat_patch, "Flatness tile edge in pixels");
    cmd->add_option("--flat-threshold", opt->flat_threshold,
                    "Patch gradient-variance floor");
    cmd->add_option("--flat-ratio", opt->flat_ratio,
                    "Maximum flagged-patch ratio before rejection");
    cmd->add_option("--entropy-min", opt->entropy_min, "Entropy floor in bits");
    cmd->add_option("--qalign-min", opt->qalign_min,
                    "Quality score floor (strictly greater passes)");
    cmd->add_option("--artimuse-percentile", opt->artimuse_percentile,
                    "Top aesthetic fraction retained, in (0, 100]");
    cmd->add_option("--skip", opt->skip_stages, "Stages to disable (repeatable)")
        ->delimiter(',');
    cmd->callback([opt, &ctx]() { run_curate(*opt, ctx); });
}

void register_bucket(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<BucketOptions>();
    CLI::App* cmd = app.add_subcommand(
        "bucket", "Assign a resolution (or a whole manifest) to its aspect-ratio bucket");
    cmd->add_option("--width", opt->width, "Source width in pixels");
    cmd->add_option("--height", opt->height, "Source height in pixels");
    cmd->add_option("--manifest", opt->manifest_path, "Batch mode: JSONL manifest");
    cmd->add_option("--output-dir", opt->output_dir, "Output directory (batch mode)")
        ->capture_default_str();
    cmd->callback([opt, &ctx]() { run_bucket(*opt, ctx); });
}

void register_audit(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<AuditOptions>();
    CLI::App* cmd = app.add_subcommand(
        "audit", "Aspect-ratio and resolution distribution summary of a manifest");
    cmd->add_option("--manifest", opt->manifest_path, "Input JSONL manifest")->required();
    cmd->add_option("--output-dir", opt->output_dir, "Output directory")
        ->capture_default_str();
    cmd->add_option("--bins", opt->bins, "Log aspect-ratio histogram bins")
        ->capture_default_str();
    cmd->callback([opt, &ctx]() { run_audit(*opt, ctx); });
}

}  // namespace dit4k::tools
