#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "dit4k/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Batch tooling for native-4K diffusion training: rotary spectrum "
                 "diagnostics, wavelet statistics, loss curves, curriculum plans, and the "
                 "dataset curation pipeline.",
                 "dit4k"};
    app.require_subcommand(0, 1);

    dit4k::tools::ToolContext ctx;
    app.add_option("--config", ctx.config_path,
                   "JSON config file (see --emit-default-config); flags override it");
    bool emit_default = false;
    app.add_flag("--emit-default-config", emit_default,
                 "Print the annotated reference config and exit");

    dit4k::tools::register_rope_diagnose(app, ctx);
    dit4k::tools::register_wavelet_stats(app, ctx);
    dit4k::tools::register_loss_curves(app, ctx);
    dit4k::tools::register_loss_check(app, ctx);
    dit4k::tools::register_curriculum_plan(app, ctx);
    dit4k::tools::register_curate(app, ctx);
    dit4k::tools::register_bucket(app, ctx);
    dit4k::tools::register_audit(app, ctx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (emit_default) {
        std::cout << dit4k::config::default_config_text();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }
    return ctx.exit_code;
}
