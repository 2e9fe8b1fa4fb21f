// Acceptance suite: one criterion per section, one PASS/FAIL line each,
// nonzero exit if anything fails. Criteria state their own runtime budgets.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dit4k/curation.hpp"
#include "dit4k/curriculum.hpp"
#include "dit4k/image.hpp"
#include "dit4k/manifest.hpp"
#include "dit4k/objective.hpp"
#include "dit4k/rope.hpp"
#include "dit4k/wavelet.hpp"
#include "support/synthetic.hpp"

#ifndef DIT4K_BIN
#error "DIT4K_BIN must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using namespace dit4k;
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
};

#define EXPECT(cond, text)                                   \
    do {                                                     \
        if (!(cond)) {                                       \
            out.ok = false;                                  \
            out.detail << "    failed: " << (text) << "\n";  \
        }                                                    \
    } while (0)

// --------------------------------------------------------------------------
// 1. Resonant spectra close exactly at p = L; the baseline does not.
// --------------------------------------------------------------------------
void criterion_1(Outcome& out) {
    using namespace rope;
    const AxisSpec axis{Axis::kHeight, 64, 64, 64};
    const RotarySpectrum baseline = base_frequencies(axis, RopeBaseConfig{10000.0, 1.0});
    const RotarySpectrum resonant = snap_to_resonance(baseline, 64);
    const auto rows = phase_closure_report(baseline, resonant, 64);

    double worst_resonant = 0.0;
    double best_baseline = 0.0;
    for (const auto& row : rows) {
        worst_resonant = std::max(worst_resonant, row.closure_resonant);
        best_baseline = std::max(best_baseline, row.closure_baseline);
    }
    EXPECT(worst_resonant < 1e-9, "resonant closure error must be < 1e-9 rad, got " +
                                      std::to_string(worst_resonant));
    EXPECT(best_baseline > 1.0, "baseline must have a band with closure error > 1 rad");
    out.detail << "    resonant worst " << worst_resonant << " rad, baseline worst "
               << best_baseline << " rad\n";
}

// --------------------------------------------------------------------------
// 2. Drift map: zero at p = 0, reaches pi inside (L, 2L] for a fractional
//    band, and agrees with direct evaluation of wrap(p*(omega - omega_hat)).
// --------------------------------------------------------------------------
void criterion_2(Outcome& out) {
    using namespace rope;
    const int train_len = 64;
    const AxisSpec axis{Axis::kHeight, 64, train_len, train_len};
    const RotarySpectrum baseline = base_frequencies(axis, RopeBaseConfig{10000.0, 1.0});
    const RotarySpectrum resonant = snap_to_resonance(baseline, train_len);

    // Integer grid plus the analytic pi-crossing positions of every band.
    std::vector<double> positions;
    for (int p = 0; p <= 2 * train_len; ++p) {
        positions.push_back(static_cast<double>(p));
    }
    for (int k = 0; k < baseline.band_count(); ++k) {
        const double delta = std::abs(baseline.omega[k] - resonant.omega[k]);
        if (delta > 0.0) {
            const double crossing = kPi / delta;
            if (crossing > train_len && crossing <= 2.0 * train_len) {
                positions.push_back(crossing);
            }
        }
    }
    std::sort(positions.begin(), positions.end());

    const PhaseDriftMap map = phase_drift_map(baseline, resonant, positions);

    bool zero_at_origin = true;
    bool in_range = true;
    bool matches_oracle = true;
    double reached = 0.0;
    for (int k = 0; k < map.band_count; ++k) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const double v = map.at(k, i);
            if (positions[i] == 0.0 && v != 0.0) {
                zero_at_origin = false;
            }
            if (v < 0.0 || v > kPi + 1e-12) {
                in_range = false;
            }
            const double direct = std::abs(
                wrap_angle(positions[i] * (baseline.omega[k] - resonant.omega[k])));
            if (std::abs(v - direct) > 1e-9) {
                matches_oracle = false;
            }
            if (positions[i] > train_len && baseline.cycles[k] != resonant.cycles[k]) {
                reached = std::max(reached, v);
            }
        }
    }
    EXPECT(zero_at_origin, "all bands must have zero drift at p = 0");
    EXPECT(in_range, "drift values must stay in [0, pi]");
    EXPECT(matches_oracle, "map must equal direct wrapped evaluation within 1e-9");
    EXPECT(reached >= kPi - 1e-6,
           "some fractional band must reach pi inside (L, 2L]; got " + std::to_string(reached));
    out.detail << "    max drift in (L, 2L]: " << reached << " rad\n";
}

// --------------------------------------------------------------------------
// 3. Band-aware scaling: identity at s = 1, exact endpoints at s = 2.
// --------------------------------------------------------------------------
void criterion_3(Outcome& out) {
    using namespace rope;
    const RopeBaseConfig base{10000.0, 1.0};
    const YarnRampConfig ramp{2.0, 9.0};
    const RotarySpectrum resonant =
        snap_to_resonance(base_frequencies(AxisSpec{Axis::kHeight, 64, 64, 64}, base), 64);

    const RotarySpectrum same = apply_yarn(resonant, AxisSpec{Axis::kHeight, 64, 64, 64}, ramp);
    bool identical = true;
    for (int k = 0; k < resonant.band_count(); ++k) {
        identical = identical && same.omega[k] == resonant.omega[k];
    }
    EXPECT(identical, "scale 1 must leave every band bit-identical");

    const RotarySpectrum doubled =
        apply_yarn(resonant, AxisSpec{Axis::kHeight, 64, 64, 128}, ramp);
    int low_bands = 0;
    int high_bands = 0;
    bool exact = true;
    for (int k = 0; k < resonant.band_count(); ++k) {
        const double g = yarn_ramp(static_cast<double>(resonant.cycles_snapped[k]), ramp);
        if (g == 0.0) {
            ++low_bands;
            exact = exact && doubled.omega[k] == resonant.omega[k] / 2.0;
        } else if (g == 1.0) {
            ++high_bands;
            exact = exact && doubled.omega[k] == resonant.omega[k];
        }
    }
    EXPECT(low_bands > 0, "ramp must leave some bands fully rescaled");
    EXPECT(high_bands > 0, "ramp must leave some bands unscaled");
    EXPECT(exact, "s = 2 endpoints must be exact (halved / unchanged)");
    out.detail << "    " << low_bands << " bands halved, " << high_bands
               << " bands untouched\n";
}

// --------------------------------------------------------------------------
// 4. Orthonormal transform: reconstruction and energy over 1000 random draws.
// --------------------------------------------------------------------------
void criterion_4(Outcome& out) {
    std::mt19937_64 rng(404);
    double worst_recon = 0.0;
    double worst_energy = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int c = 1 + static_cast<int>(rng() % 8);
        const int h = 2 * (1 + static_cast<int>(rng() % 32));
        const int w = 2 * (1 + static_cast<int>(rng() % 32));
        const Tensor3 x = testing::random_tensor(c, h, w, rng, 3.0);
        const wavelet::SubbandTensor s = wavelet::dwt_forward(x);
        const Tensor3 back = wavelet::dwt_inverse(s);

        double energy_in = 0.0;
        double energy_out = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst_recon = std::max(worst_recon, std::abs(back.data[i] - x.data[i]));
            energy_in += x.data[i] * x.data[i];
        }
        for (int b = 0; b < 4; ++b) {
            for (double v : s.band(b).data) {
                energy_out += v * v;
            }
        }
        worst_energy = std::max(worst_energy, std::abs(energy_out - energy_in) / energy_in);
    }
    EXPECT(worst_recon < 1e-6, "max reconstruction error must be < 1e-6");
    EXPECT(worst_energy < 1e-9, "relative energy mismatch must be < 1e-9");
    out.detail << "    recon " << worst_recon << ", energy " << worst_energy << "\n";
}

// --------------------------------------------------------------------------
// 5. Analytic gradient vs central differences over 100 random configurations.
// --------------------------------------------------------------------------
void criterion_5(Outcome& out) {
    using namespace objective;
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int c = 1 + static_cast<int>(rng() % 3);
        const int h = 2 * (1 + static_cast<int>(rng() % 4));
        const int w = 2 * (1 + static_cast<int>(rng() % 4));
        const double t = 0.05 + 0.9 * unit(rng);
        FlowSample sample{testing::random_tensor(c, h, w, rng),
                          testing::random_tensor(c, h, w, rng), t};
        const Tensor3 v_pred = testing::random_tensor(c, h, w, rng);
        const MinSnrConfig min_snr{0.5 + 19.5 * unit(rng), unit(rng)};
        const double c_min = 0.05 + 0.45 * unit(rng);
        const HuberSchedule schedule{c_min, c_min + 2.0 * unit(rng), unit(rng)};

        const GradientCheckResult check =
            gradient_check(sample, v_pred, min_snr, schedule, 1e-4);
        worst = std::max(worst, check.max_rel_error);
    }
    EXPECT(worst < 1e-4, "max relative gradient error must be < 1e-4, got " +
                             std::to_string(worst));
    out.detail << "    max relative error " << worst << "\n";
}

// --------------------------------------------------------------------------
// 6. Quadratic limit: c = 1e9, exponent 0 reduces to the weighted half mean
//    squared latent residual (Parseval route), 100 draws.
// --------------------------------------------------------------------------
void criterion_6(Outcome& out) {
    using namespace objective;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const MinSnrConfig min_snr{5.0, 0.0};
    const HuberSchedule quadratic{1e9, 1e9, 1.0};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int c = 1 + static_cast<int>(rng() % 4);
        const int h = 2 * (1 + static_cast<int>(rng() % 8));
        const int w = 2 * (1 + static_cast<int>(rng() % 8));
        const double t = 0.05 + 0.9 * unit(rng);
        FlowSample sample{testing::random_tensor(c, h, w, rng),
                          testing::random_tensor(c, h, w, rng), t};
        const Tensor3 v_pred = testing::random_tensor(c, h, w, rng);

        const double loss = snr_hw_loss(sample, v_pred, min_snr, quadratic).loss;

        const Tensor3 zhat = data_prediction(interpolate(sample), v_pred, t);
        double mean_sq = 0.0;
        for (std::size_t i = 0; i < zhat.size(); ++i) {
            const double d = zhat.data[i] - sample.clean.data[i];
            mean_sq += d * d;
        }
        mean_sq /= static_cast<double>(zhat.size());
        const double reference = timestep_weight(t, min_snr) * 0.5 * mean_sq;
        worst = std::max(worst, std::abs(loss - reference) / reference);
    }
    EXPECT(worst < 1e-6, "flow-matching limit must match within 1e-6 relative, got " +
                             std::to_string(worst));
    out.detail << "    max relative mismatch " << worst << "\n";
}

// --------------------------------------------------------------------------
// 7. Twelve synthetic images with hand-computed stage outcomes.
// --------------------------------------------------------------------------
void criterion_7(Outcome& out) {
    using namespace curation;
    const fs::path dir = testing::fresh_dir("dit4k_acceptance_fixtures");

    write_pgm(dir / "f01.pgm", testing::noise_image(3840, 2160, 701));
    write_pgm(dir / "f02.pgm", testing::noise_image(2160, 3840, 702));
    write_pgm(dir / "f03.pgm", testing::noise_image(2880, 2880, 703));
    fs::copy_file(dir / "f03.pgm", dir / "f04.pgm");
    write_pgm(dir / "f05.pgm", testing::noise_image(4096, 2048, 705));
    write_pgm(dir / "f06.pgm", testing::equalized_128_image(3840, 2160, 706));
    write_pgm(dir / "f07.pgm", testing::noise_image(4000, 2000, 707));
    write_pgm(dir / "f08.pgm", testing::constant_image(3840, 2160, 128));
    write_pgm(dir / "f09.pgm", testing::half_flat_image(4800, 2160, 709));
    write_pgm(dir / "f10.pgm", testing::checkerboard_image(2880, 2880));
    write_pgm(dir / "f11.pgm", testing::noise_image(3840, 2160, 711));
    write_pgm(dir / "f12.pgm", testing::noise_image(3840, 2160, 712));

    auto rec = [](const std::string& id, int w, int h, std::optional<double> q,
                  std::optional<double> art) {
        ImageMetaRecord r;
        r.id = id;
        r.width = w;
        r.height = h;
        r.path = id + ".pgm";
        r.q_align = q;
        r.artimuse = art;
        return r;
    };
    std::vector<ImageMetaRecord> records = {
        rec("f01", 3840, 2160, 4.5, 95.0),         // passes everything
        rec("f02", 2160, 3840, 4.3, 90.0),         // portrait boundary pixel count
        rec("f03", 2880, 2880, 4.2, 85.0),         // duplicate pair, kept
        rec("f04", 2880, 2880, 4.2, 84.0),         // duplicate pair, removed
        rec("f05", 4096, 2048, 4.4, 10.0),         // aesthetic rank drop
        rec("f06", 3840, 2160, 4.6, 70.0),         // entropy exactly 7.0: passes
        rec("f07", 4000, 2000, 5.0, 99.0),         // 8.0 MP: fails the gate
        rec("f08", 3840, 2160, 4.9, 95.0),         // constant: flatness ratio 1
        rec("f09", 4800, 2160, 4.9, 95.0),         // ratio exactly 0.5 passes, entropy fails
        rec("f10", 2880, 2880, 4.9, 95.0),         // checkerboard: sobel cancels
        rec("f11", 3840, 2160, 4.0, 88.0),         // q-align boundary: strict fail
        rec("f12", 3840, 2160, std::nullopt, 80.0) // missing q-align: pending
    };

    PipelineConfig cfg;
    cfg.artimuse_percentile = 80.0;  // keep the duplicate pair alive through the rank
    cfg.workers = 2;
    cfg.image_root = dir;

    const PipelineResult result = run_pipeline(records, cfg);

    auto ids = [](const std::vector<ImageMetaRecord>& list) {
        std::vector<std::string> v;
        for (const auto& r : list) {
            v.push_back(r.id);
        }
        return v;
    };
    EXPECT(ids(result.curated) == std::vector<std::string>({"f01", "f02", "f03", "f06"}),
           "curated set must be exactly {f01, f02, f03, f06}");
    EXPECT(ids(result.pending) == std::vector<std::string>({"f12"}),
           "pending set must be exactly {f12}");
    EXPECT(result.quarantined.empty(), "nothing may be quarantined");
    EXPECT(result.duplicates_removed == 1, "exactly one duplicate must be removed");

    auto trace_of = [&](const std::string& id,
                        const std::string& stage) -> const TraceEntry* {
        auto scan = [&](const std::vector<ImageMetaRecord>& list) -> const TraceEntry* {
            for (const auto& r : list) {
                if (r.id != id) {
                    continue;
                }
                for (const auto& t : r.filter_trace) {
                    if (t.stage == stage) {
                        return &t;
                    }
                }
            }
            return nullptr;
        };
        if (const TraceEntry* t = scan(result.curated)) return t;
        if (const TraceEntry* t = scan(result.dropped)) return t;
        if (const TraceEntry* t = scan(result.pending)) return t;
        return nullptr;
    };

    const TraceEntry* gate = trace_of("f01", "resolution");
    EXPECT(gate && gate->pass && gate->value == 8294400.0,
           "f01 gate: 3840x2160 is the boundary pass");
    const TraceEntry* gate_fail = trace_of("f07", "resolution");
    EXPECT(gate_fail && !gate_fail->pass && gate_fail->value == 8000000.0,
           "f07 gate: 8.0 MP fails");
    const TraceEntry* flat_half = trace_of("f09", "flatness");
    EXPECT(flat_half && flat_half->pass && flat_half->value == 0.5,
           "f09 flatness: ratio exactly 0.5 passes");
    const TraceEntry* ent_half = trace_of("f09", "entropy");
    EXPECT(ent_half && !ent_half->pass, "f09 entropy: half-constant image fails");
    const TraceEntry* ent_exact = trace_of("f06", "entropy");
    EXPECT(ent_exact && ent_exact->pass && ent_exact->value == 7.0,
           "f06 entropy: exactly 7.0 bits passes");
    const TraceEntry* flat_const = trace_of("f08", "flatness");
    EXPECT(flat_const && !flat_const->pass && flat_const->value == 1.0,
           "f08 flatness: constant image flags every patch");
    const TraceEntry* flat_checker = trace_of("f10", "flatness");
    EXPECT(flat_checker && !flat_checker->pass && flat_checker->value == 1.0,
           "f10 flatness: checkerboard sobel cancels to zero");
    const TraceEntry* q_boundary = trace_of("f11", "q_align");
    EXPECT(q_boundary && !q_boundary->pass && q_boundary->value == 4.0,
           "f11 q-align: score 4.0 fails the strict gate");
    const TraceEntry* rank_drop = trace_of("f05", "artimuse");
    EXPECT(rank_drop && !rank_drop->pass, "f05 must fall out of the aesthetic rank");
    const TraceEntry* dup = trace_of("f04", "dedup");
    EXPECT(dup && !dup->pass && dup->value == 2.0, "f04 is the removed duplicate");

    fs::remove_all(dir);
    out.detail << "    curated {f01, f02, f03, f06}, pending {f12}\n";
}

// --------------------------------------------------------------------------
// 8. Bucket self-map and 1000 random draws against the brute-force scan.
// --------------------------------------------------------------------------
void criterion_8(Outcome& out) {
    using namespace curation;
    const BucketSet set = BucketSet::default_set();

    bool self_map = true;
    for (std::size_t i = 0; i < set.buckets.size(); ++i) {
        const Bucket& b = set.buckets[i];
        const CropPlan plan = bucket_assign(b.width, b.height, set);
        self_map = self_map && plan.bucket_index == static_cast<int>(i) &&
                   plan.crop_x == 0 && plan.crop_y == 0 && plan.crop_width == b.width &&
                   plan.crop_height == b.height;
    }
    EXPECT(self_map, "all 15 stock buckets must self-map with full-frame crops");

    auto oracle = [&set](int w, int h) {
        const double target = std::log(static_cast<double>(w) / h);
        int best = -1;
        double best_d = 0.0;
        std::int64_t best_px = 0;
        for (std::size_t i = 0; i < set.buckets.size(); ++i) {
            const double d = std::abs(
                target - std::log(static_cast<double>(set.buckets[i].width) /
                                  set.buckets[i].height));
            const std::int64_t px =
                static_cast<std::int64_t>(set.buckets[i].width) * set.buckets[i].height;
            if (best < 0 || d < best_d || (d == best_d && px > best_px)) {
                best = static_cast<int>(i);
                best_d = d;
                best_px = px;
            }
        }
        return best;
    };

    std::mt19937_64 rng(808);
    bool agree = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int w = 512 + static_cast<int>(rng() % 7681);
        const int h = 512 + static_cast<int>(rng() % 7681);
        if (bucket_assign(w, h, set).bucket_index != oracle(w, h)) {
            agree = false;
            out.detail << "    mismatch at " << w << "x" << h << "\n";
        }
    }
    EXPECT(agree, "1000 random draws must agree with the brute-force scan");
}

// --------------------------------------------------------------------------
// 9. Stage filter cardinality and band-confined timestep sampling.
// --------------------------------------------------------------------------
void criterion_9(Outcome& out) {
    using namespace curriculum;

    std::vector<ImageMetaRecord> records;
    std::mt19937_64 rng(909);
    for (int i = 0; i < 10000; ++i) {
        ImageMetaRecord r;
        r.id = "rec" + std::to_string(1000000 + i);
        r.width = 4096;
        r.height = 4096;
        r.artimuse = static_cast<double>(rng() % 100000) / 100.0;
        records.push_back(std::move(r));
    }
    StageSpec stage;
    stage.name = "stage2";
    stage.band_lo = 0;
    stage.band_hi = 459;
    stage.convention = TimestepConvention::kIndexZeroIsNoise;
    stage.aesthetic_percentile = 5.0;
    stage.steps = 2000;

    const auto kept = filter_records(records, stage);
    EXPECT(kept.size() == 500, "percentile 5 of 10000 must retain exactly 500, got " +
                                   std::to_string(kept.size()));

    std::vector<bool> is_kept(records.size(), false);
    for (std::size_t i : kept) {
        is_kept[i] = true;
    }
    double min_kept = 1e300;
    double max_dropped = -1e300;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (is_kept[i]) {
            min_kept = std::min(min_kept, *records[i].artimuse);
        } else {
            max_dropped = std::max(max_dropped, *records[i].artimuse);
        }
    }
    EXPECT(min_kept >= max_dropped, "every retained score must be >= every dropped score");

    TimestepSampler sampler(909);
    bool in_band = true;
    for (int i = 0; i < 1000000; ++i) {
        const int ts = sampler.sample(stage);
        if (ts < 0 || ts > 459) {
            in_band = false;
            break;
        }
    }
    EXPECT(in_band, "a million draws over [0, 459] must never leave the band");
    out.detail << "    retained 500; min kept " << min_kept << " >= max dropped "
               << max_dropped << "\n";
}

// --------------------------------------------------------------------------
// 10. End-to-end determinism and throughput of the curate subcommand on 100
//     synthetic 4K images, even AR mix, two runs byte-identical.
// --------------------------------------------------------------------------
int run_cli(const std::string& args) {
    const std::string command = std::string("\"") + DIT4K_BIN + "\" " + args;
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_lines(const fs::path& path) {
    std::ifstream in(path);
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lines;
    }
    return lines;
}

void criterion_10(Outcome& out) {
    const fs::path dir = testing::fresh_dir("dit4k_acceptance_throughput");
    const fs::path images = dir / "images";
    fs::create_directories(images);

    const int shapes[4][2] = {{3840, 2160}, {2160, 3840}, {2880, 2880}, {4096, 2048}};
    std::vector<ImageMetaRecord> records;
    for (int i = 0; i < 100; ++i) {
        const int w = shapes[i % 4][0];
        const int h = shapes[i % 4][1];
        char name[32];
        std::snprintf(name, sizeof(name), "img%03d", i);
        write_pgm(images / (std::string(name) + ".pgm"),
                  testing::noise_image(w, h, 1000 + i));
        ImageMetaRecord r;
        r.id = name;
        r.width = w;
        r.height = h;
        r.path = std::string(name) + ".pgm";
        r.q_align = 4.1 + 0.01 * (i % 50);
        r.artimuse = 50.0 + (i * 7) % 40;
        records.push_back(std::move(r));
    }
    write_manifest(dir / "manifest.jsonl", records);

    const std::string base_flags = " --manifest \"" + (dir / "manifest.jsonl").string() +
                                   "\" --image-root \"" + images.string() +
                                   "\" --workers 4 --seed 7 --output-dir \"";
    const auto t0 = std::chrono::steady_clock::now();
    const int code1 = run_cli("curate" + base_flags + (dir / "run1").string() + "\" > \"" +
                              (dir / "run1.log").string() + "\" 2>&1");
    const auto t1 = std::chrono::steady_clock::now();
    const int code2 = run_cli("curate" + base_flags + (dir / "run2").string() + "\" > \"" +
                              (dir / "run2.log").string() + "\" 2>&1");
    const auto t2 = std::chrono::steady_clock::now();

    EXPECT(code1 == 0, "first curate run must exit 0, got " + std::to_string(code1));
    EXPECT(code2 == 0, "second curate run must exit 0, got " + std::to_string(code2));

    bool identical = true;
    for (const char* name : {"curated.jsonl", "dropped.jsonl", "pending.jsonl",
                             "curation_report.json"}) {
        const std::string a = file_bytes(dir / "run1" / name);
        const std::string b = file_bytes(dir / "run2" / name);
        if (a.empty() && std::string(name) == "curated.jsonl") {
            identical = false;
            out.detail << "    " << name << " is empty\n";
        }
        if (a != b) {
            identical = false;
            out.detail << "    " << name << " differs between runs\n";
        }
    }
    EXPECT(identical, "both runs must produce byte-identical outputs");

    const double seconds1 = std::chrono::duration<double>(t1 - t0).count();
    const double seconds2 = std::chrono::duration<double>(t2 - t1).count();
    EXPECT(seconds1 < 300.0 && seconds2 < 300.0,
           "each run must finish within 5 minutes");
    out.detail << "    run 1: " << seconds1 << " s, run 2: " << seconds2 << " s, curated "
               << count_lines(dir / "run1" / "curated.jsonl") << " records\n";

    fs::remove_all(dir);
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* title;
        double budget_seconds;
        std::function<void(Outcome&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "resonant phase closure at the training-window boundary", 1.0, criterion_1},
        {2, "phase-drift map vs direct evaluation, half-cycle buildup to pi", 1.0,
         criterion_2},
        {3, "band-aware extrapolation scaling: identity and exact endpoints", 1.0,
         criterion_3},
        {4, "wavelet round trip and energy preservation, 1000 random tensors", 10.0,
         criterion_4},
        {5, "objective gradient vs central differences, 100 configurations", 30.0,
         criterion_5},
        {6, "quadratic-limit reduction to weighted mean-square residual", 10.0,
         criterion_6},
        {7, "curation fixtures with hand-computed stage outcomes", 30.0, criterion_7},
        {8, "bucket self-map and brute-force nearest-bucket agreement", 5.0, criterion_8},
        {9, "stage filter cardinality and band-confined sampling", 10.0, criterion_9},
        {10, "curate determinism and throughput on 100 synthetic 4K images", 660.0,
         criterion_10},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(out);
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail << "    exception: " << e.what() << "\n";
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed >= criterion.budget_seconds) {
            out.ok = false;
            out.detail << "    runtime " << elapsed << " s exceeded the "
                       << criterion.budget_seconds << " s budget\n";
        }
        std::cout << (out.ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number
                  << ": " << criterion.title << " (" << elapsed << " s)\n"
                  << out.detail.str();
        if (!out.ok) {
            ++failures;
        }
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 10 criteria passed\n";
    return 0;
}
