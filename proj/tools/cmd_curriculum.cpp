#include <iostream>
#include <memory>

#include "common.hpp"
#include "dit4k/curriculum.hpp"
#include "dit4k/manifest.hpp"

namespace dit4k::tools {

namespace {

struct CurriculumPlanOptions {
    std::string plan_path;
    std::string manifest_path;
};

void run(const CurriculumPlanOptions& opt, ToolContext& ctx) {
    curriculum::CurriculumPlan plan;
    if (!opt.plan_path.empty()) {
        plan = curriculum::load_plan(opt.plan_path);
    } else if (ctx.config().curriculum.has_value()) {
        plan = *ctx.config().curriculum;
        plan.validate();
    } else {
        throw std::runtime_error("curriculum-plan: provide --plan or a config with a "
                                 "curriculum section");
    }

    std::vector<ImageMetaRecord> records;
    if (!opt.manifest_path.empty()) {
        records = read_manifest(opt.manifest_path);
    }

    std::cout << "plan: " << plan.stages.size() << " stage(s)";
    if (!opt.manifest_path.empty()) {
        std::cout << ", " << records.size() << " record(s) in " << opt.manifest_path;
    }
    std::cout << "\n";
    for (const curriculum::StageSpec& stage : plan.stages) {
        std::cout << "  " << stage.name << ": band [" << stage.band_lo << ", "
                  << stage.band_hi << "] (" << curriculum::convention_name(stage.convention)
                  << "), top " << format_double(stage.aesthetic_percentile)
                  << "% by aesthetic score, " << stage.steps << " steps";
        if (!records.empty()) {
            const auto kept = curriculum::filter_records(records, stage);
            std::cout << " -> retains " << kept.size() << " of " << records.size()
                      << " records";
        }
        std::cout << "\n";
    }
}

}  // namespace

void register_curriculum_plan(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<CurriculumPlanOptions>();
    CLI::App* cmd = app.add_subcommand(
        "curriculum-plan",
        "Validate a stage plan and resolve its per-stage record counts against a manifest");
    cmd->add_option("--plan", opt->plan_path, "Plan JSON file");
    cmd->add_option("--manifest", opt->manifest_path,
                    "JSONL manifest to count stage retention against");
    cmd->callback([opt, &ctx]() { run(*opt, ctx); });
}

}  // namespace dit4k::tools
