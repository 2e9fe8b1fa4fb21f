#include <algorithm>
#include <iostream>
#include <map>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "dit4k/image.hpp"
#include "dit4k/latent_io.hpp"
#include "dit4k/wavelet.hpp"

namespace dit4k::tools {

namespace {

using dit4k::wavelet::kBandNames;
using nlohmann::ordered_json;

struct WaveletStatsOptions {
    std::string input;
    std::vector<double> thresholds = {0.5, 1.0};
    int bins = 64;
    std::string output_dir = ".";
};

// Raster inputs become a 1-channel tensor of luma in [0, 1]; odd image
// dimensions are trimmed by one row/column. Latent (.lat) files are used
// verbatim and must have even dimensions.
Tensor3 load_input(const std::filesystem::path& path) {
    if (path.extension() == ".lat") {
        return read_latent(path);
    }
    const GrayImage img = decode_gray(path);
    const int h = img.height - img.height % 2;
    const int w = img.width - img.width % 2;
    if (h == 0 || w == 0) {
        throw std::runtime_error("image too small: " + path.string());
    }
    Tensor3 t(1, h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            t.at(0, y, x) = img.at(x, y) / 255.0;
        }
    }
    return t;
}

std::vector<std::filesystem::path> gather_inputs(const std::filesystem::path& input) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(input)) {
        for (const auto& entry : std::filesystem::directory_iterator(input)) {
            if (entry.is_regular_file()) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    if (files.empty()) {
        throw std::runtime_error("no input files under " + input.string());
    }
    return files;
}

ordered_json stats_to_json(const wavelet::SubbandStats& stats) {
    ordered_json j;
    for (int b = 0; b < 4; ++b) {
        ordered_json band;
        band["energy_fraction"] = stats.energy_fraction[b];
        ordered_json tails;
        for (std::size_t t = 0; t < stats.thresholds.size(); ++t) {
            tails[format_double(stats.thresholds[t])] = stats.tail_fraction[b][t];
        }
        band["tail_fraction"] = std::move(tails);
        band["max_abs"] = stats.max_abs[b];
        j[kBandNames[b]] = std::move(band);
    }
    return j;
}

void run(const WaveletStatsOptions& opt) {
    const auto out_dir = ensure_output_dir(opt.output_dir);
    const auto files = gather_inputs(opt.input);

    // Pass 1: per-file stats; track the global max for pooled histogram edges.
    ordered_json per_file = ordered_json::object();
    double global_max = 0.0;
    std::array<double, 4> pooled_energy{};
    std::array<std::vector<double>, 4> pooled_tail_counts;
    std::array<double, 4> pooled_max{};
    for (int b = 0; b < 4; ++b) {
        pooled_tail_counts[b].assign(opt.thresholds.size(), 0.0);
    }
    double pooled_count_per_band = 0.0;

    std::vector<std::filesystem::path> processed;
    for (const auto& file : files) {
        try {
            const Tensor3 tensor = load_input(file);
            const wavelet::SubbandTensor sub = wavelet::dwt_forward(tensor);
            const wavelet::SubbandStats stats =
                wavelet::subband_stats(sub, opt.thresholds, opt.bins);
            per_file[file.filename().string()] = stats_to_json(stats);

            const double band_count = static_cast<double>(sub.ll.size());
            pooled_count_per_band += band_count;
            for (int b = 0; b < 4; ++b) {
                for (double v : sub.band(b).data) {
                    pooled_energy[b] += v * v;
                }
                pooled_max[b] = std::max(pooled_max[b], stats.max_abs[b]);
                global_max = std::max(global_max, stats.max_abs[b]);
                for (std::size_t t = 0; t < opt.thresholds.size(); ++t) {
                    pooled_tail_counts[b][t] += stats.tail_fraction[b][t] * band_count;
                }
            }
            processed.push_back(file);
        } catch (const std::exception& e) {
            std::cerr << "wavelet-stats: skipping " << file << ": " << e.what() << "\n";
            per_file[file.filename().string()] = ordered_json{{"error", e.what()}};
        }
    }
    if (processed.empty()) {
        throw std::runtime_error("wavelet-stats: no input could be processed");
    }

    // Pass 2: pooled histogram over shared edges.
    const double hist_top = global_max > 0.0 ? global_max : 1.0;
    std::array<std::vector<std::uint64_t>, 4> pooled_hist;
    for (int b = 0; b < 4; ++b) {
        pooled_hist[b].assign(opt.bins, 0);
    }
    for (const auto& file : processed) {
        const wavelet::SubbandTensor sub = wavelet::dwt_forward(load_input(file));
        for (int b = 0; b < 4; ++b) {
            for (double v : sub.band(b).data) {
                int bin = static_cast<int>(std::abs(v) / hist_top * opt.bins);
                bin = std::clamp(bin, 0, opt.bins - 1);
                ++pooled_hist[b][bin];
            }
        }
    }

    const double total_energy =
        pooled_energy[0] + pooled_energy[1] + pooled_energy[2] + pooled_energy[3];
    ordered_json aggregate;
    for (int b = 0; b < 4; ++b) {
        ordered_json band;
        band["energy_fraction"] = total_energy > 0.0 ? pooled_energy[b] / total_energy : 0.0;
        ordered_json tails;
        for (std::size_t t = 0; t < opt.thresholds.size(); ++t) {
            tails[format_double(opt.thresholds[t])] =
                pooled_count_per_band > 0.0 ? pooled_tail_counts[b][t] / pooled_count_per_band
                                            : 0.0;
        }
        band["tail_fraction"] = std::move(tails);
        band["max_abs"] = pooled_max[b];
        aggregate[kBandNames[b]] = std::move(band);
    }

    ordered_json report;
    report["input"] = opt.input;
    report["files_processed"] = processed.size();
    report["aggregate"] = std::move(aggregate);
    report["per_file"] = std::move(per_file);

    std::ofstream json_out(out_dir / "wavelet_stats.json");
    json_out << report.dump(2) << "\n";

    CsvWriter csv(out_dir / "wavelet_histogram.csv");
    for (const char* column : {"band", "bin_low", "bin_high", "count"}) {
        csv.cell(std::string(column));
    }
    csv.end_row();
    for (int b = 0; b < 4; ++b) {
        for (int i = 0; i < opt.bins; ++i) {
            csv.cell(std::string(kBandNames[b]));
            csv.cell(hist_top * i / opt.bins);
            csv.cell(hist_top * (i + 1) / opt.bins);
            csv.cell(static_cast<std::int64_t>(pooled_hist[b][i]));
            csv.end_row();
        }
    }
}

}  // namespace

void register_wavelet_stats(CLI::App& app, ToolContext& ctx) {
    (void)ctx;
    auto opt = std::make_shared<WaveletStatsOptions>();
    CLI::App* cmd = app.add_subcommand(
        "wavelet-stats",
        "One-level Haar subband statistics of latent tensors (.lat) or raster images");
    cmd->add_option("--input", opt->input, "Input file or directory")->required();
    cmd->add_option("--thresholds", opt->thresholds,
                    "Tail thresholds on |coefficient|")
        ->capture_default_str();
    cmd->add_option("--bins", opt->bins, "Histogram bin count")->capture_default_str();
    cmd->add_option("--output-dir", opt->output_dir, "Output directory")
        ->capture_default_str();
    cmd->callback([opt]() { run(*opt); });
}

}  // namespace dit4k::tools
