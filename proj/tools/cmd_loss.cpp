#include <iostream>
#include <memory>
#include <random>

#include "common.hpp"
#include "dit4k/objective.hpp"

namespace dit4k::tools {

namespace {

using namespace dit4k::objective;

struct LossOptions {
    double snr_clip = -1.0;      // negative: unset
    double snr_exponent = -1.0;  // negative: unset
    double c_min = 0.2;
    double c_max = 1.0;
    double huber_exponent = 1.0;
    int points = 1000;
    std::string output_dir = ".";
    // loss-check only:
    int draws = 100;
    std::uint64_t seed = 0;
    double step = 1e-4;
    double max_rel_error = 1e-4;
};

void add_objective_flags(CLI::App* cmd, LossOptions& opt) {
    cmd->add_option("--snr-clip", opt.snr_clip,
                    "Min-SNR clip, > 0 (required unless the config provides it)");
    cmd->add_option("--snr-exponent", opt.snr_exponent,
                    "Min-SNR exponent, >= 0 (required unless the config provides it)");
    cmd->add_option("--c-min", opt.c_min, "Pseudo-Huber threshold floor")
        ->capture_default_str();
    cmd->add_option("--c-max", opt.c_max, "Pseudo-Huber threshold ceiling")
        ->capture_default_str();
    cmd->add_option("--huber-exponent", opt.huber_exponent, "Schedule shape in [0, 1]")
        ->capture_default_str();
}

// There are no stock values for the min-SNR pair; they come from a flag or an
// explicit config, never from a silent fallback.
void resolve_objective(LossOptions& opt, ToolContext& ctx, MinSnrConfig& min_snr,
                       HuberSchedule& schedule) {
    const bool have_flags = opt.snr_clip >= 0.0 && opt.snr_exponent >= 0.0;
    if (!have_flags && ctx.config().objective.has_value()) {
        const auto& section = *ctx.config().objective;
        if (opt.snr_clip < 0.0) {
            opt.snr_clip = section.min_snr.snr_clip;
        }
        if (opt.snr_exponent < 0.0) {
            opt.snr_exponent = section.min_snr.snr_exponent;
        }
    }
    if (opt.snr_clip < 0.0) {
        throw std::runtime_error("--snr-clip is required (no default)");
    }
    if (opt.snr_exponent < 0.0) {
        throw std::runtime_error("--snr-exponent is required (no default)");
    }
    min_snr = MinSnrConfig{opt.snr_clip, opt.snr_exponent};
    schedule = HuberSchedule{opt.c_min, opt.c_max, opt.huber_exponent};
    min_snr.validate();
    schedule.validate();
}

void run_curves(LossOptions& opt, ToolContext& ctx) {
    MinSnrConfig min_snr;
    HuberSchedule schedule;
    resolve_objective(opt, ctx, min_snr, schedule);
    if (opt.points < 1) {
        throw std::runtime_error("--points must be >= 1");
    }

    const auto out_dir = ensure_output_dir(opt.output_dir);
    CsvWriter csv(out_dir / "loss_curves.csv");
    for (const char* column : {"t", "snr", "weight", "huber_c"}) {
        csv.cell(std::string(column));
    }
    csv.end_row();
    for (int i = 0; i < opt.points; ++i) {
        const double t = (i + 0.5) / opt.points;  // grid midpoints, strictly inside (0,1)
        csv.cell(t);
        csv.cell(snr(t));
        csv.cell(timestep_weight(t, min_snr));
        csv.cell(huber_threshold(t, schedule, min_snr));
        csv.end_row();
    }
}

void run_check(LossOptions& opt, ToolContext& ctx) {
    MinSnrConfig min_snr;
    HuberSchedule schedule;
    resolve_objective(opt, ctx, min_snr, schedule);
    if (opt.draws < 1) {
        throw std::runtime_error("--draws must be >= 1");
    }

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto fill = [&rng, &gauss](Tensor3& t) {
        for (double& v : t.data) {
            v = gauss(rng);
        }
    };

    double worst = 0.0;
    for (int draw = 0; draw < opt.draws; ++draw) {
        const int c = 1 + static_cast<int>(rng() % 3);
        const int h = 2 * (1 + static_cast<int>(rng() % 4));
        const int w = 2 * (1 + static_cast<int>(rng() % 4));
        FlowSample sample{Tensor3(c, h, w), Tensor3(c, h, w),
                          0.05 + 0.9 * ((rng() % 1000) + 0.5) / 1000.0};
        fill(sample.clean);
        fill(sample.noise);
        Tensor3 v_pred(c, h, w);
        fill(v_pred);

        const GradientCheckResult check =
            gradient_check(sample, v_pred, min_snr, schedule, opt.step);
        worst = std::max(worst, check.max_rel_error);
    }

    std::cout << "loss-check: draws=" << opt.draws << " step=" << format_double(opt.step)
              << " max_rel_error=" << format_double(worst) << "\n";
    if (!(worst < opt.max_rel_error)) {
        std::cerr << "loss-check: FAILED (tolerance " << format_double(opt.max_rel_error)
                  << ")\n";
        ctx.exit_code = 1;
    }
}

}  // namespace

void register_loss_curves(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<LossOptions>();
    CLI::App* cmd = app.add_subcommand(
        "loss-curves", "Emit t, SNR(t), weight(t), c(t) over the midpoint t-grid as CSV");
    add_objective_flags(cmd, *opt);
    cmd->add_option("--points", opt->points, "Grid resolution")->capture_default_str();
    cmd->add_option("--output-dir", opt->output_dir, "Output directory")
        ->capture_default_str();
    cmd->callback([opt, &ctx]() { run_curves(*opt, ctx); });
}

void register_loss_check(CLI::App& app, ToolContext& ctx) {
    auto opt = std::make_shared<LossOptions>();
    CLI::App* cmd = app.add_subcommand(
        "loss-check",
        "Verify the analytic objective gradient against central finite differences");
    add_objective_flags(cmd, *opt);
    cmd->add_option("--draws", opt->draws, "Random configurations to test")
        ->capture_default_str();
    cmd->add_option("--seed", opt->seed, "RNG seed")->capture_default_str();
    cmd->add_option("--step", opt->step, "Finite-difference step")->capture_default_str();
    cmd->add_option("--max-rel-error", opt->max_rel_error, "Failure threshold")
        ->capture_default_str();
    cmd->callback([opt, &ctx]() { run_check(*opt, ctx); });
}

}  // namespace dit4k::tools
