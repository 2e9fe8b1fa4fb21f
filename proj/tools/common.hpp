#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dit4k/config.hpp"

namespace dit4k::tools {

// State shared between main() and the subcommand callbacks.
struct ToolContext {
    std::string config_path;
    int exit_code = 0;

    // Loads --config once, on first use; absent file path means defaults.
    const config::ToolConfig& config();

   private:
    std::optional<config::ToolConfig> loaded_;
};

std::filesystem::path ensure_output_dir(const std::string& dir);

// Shortest round-trip formatting, locale-independent.
std::string format_double(double value);

class CsvWriter {
   public:
    explicit CsvWriter(const std::filesystem::path& path);
    void cell(const std::string& text);
    void cell(double value);
    void cell(std::int64_t value);
    void end_row();
    ~CsvWriter();

   private:
    std::ofstream out_;
    bool row_started_ = false;
};

void register_rope_diagnose(CLI::App& app, ToolContext& ctx);
void register_wavelet_stats(CLI::App& app, ToolContext& ctx);
void register_loss_curves(CLI::App& app, ToolContext& ctx);
void register_loss_check(CLI::App& app, ToolContext& ctx);
void register_curriculum_plan(CLI::App& app, ToolContext& ctx);
void register_curate(CLI::App& app, ToolContext& ctx);
void register_bucket(CLI::App& app, ToolContext& ctx);
void register_audit(CLI::App& app, ToolContext& ctx);

}  // namespace dit4k::tools
