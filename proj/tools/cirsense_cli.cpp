#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cirsense/config.hpp"
#include "cirsense/errors.hpp"
#include "cirsense/io.hpp"
#include "cirsense/pipeline.hpp"
#include "cirsense/simulator.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw cirsense::Error("cannot open " + path + " for writing");
    }
    return out;
}

void print_summary(const cirsense::DetectionSummary& summary) {
    for (const auto& [mode, ratio] : summary.ratio) {
        std::printf("%-10s detection ratio %.4f over %zu epochs\n", cirsense::to_string(mode).c_str(), ratio,
                    summary.report_count.at(mode));
    }
    std::vector<double> residuals;
    for (const auto& r : summary.residuals) {
        if (r) {
            residuals.push_back(*r);
        }
    }
    if (!residuals.empty()) {
        std::sort(residuals.begin(), residuals.end());
        const double mean = std::accumulate(residuals.begin(), residuals.end(), 0.0) /
                            static_cast<double>(residuals.size());
        std::printf("residual d_r_est - reference: mean %+.3f m, median %+.3f m, n=%zu\n", mean,
                    residuals[residuals.size() / 2], residuals.size());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cirsense: parking occupancy from UWB channel impulse responses"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string calib_path;
    std::string input_path;
    std::string output_path;
    std::string mode_text = "filtered";
    std::string scene = "occupied";
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
    std::optional<std::uint64_t> epoch;
    std::optional<std::string> truth;
    std::vector<std::string> report_paths;

    const auto add_scenario = [&](CLI::App* cmd) {
        cmd->add_option("-s,--scenario", scenario_path, "Scenario configuration file")->required();
    };
    const auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode_text, "filtered or unfiltered")
            ->check(CLI::IsMember({"filtered", "unfiltered"}));
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Synthesize a CIR record file from a scenario");
    add_scenario(simulate);
    simulate->add_option("--scene", scene, "empty (calibration) or occupied")
        ->check(CLI::IsMember({"empty", "occupied"}));
    simulate->add_option("-o,--output", output_path, "CIR record file to write")->required();
    simulate->add_option("--snr-db", snr_db, "Direct-path peak to noise ratio in dB");
    simulate->add_option("--seed", seed, "Noise and phase seed");
    simulate->add_option("--epochs", epochs, "Number of epochs")->check(CLI::PositiveNumber);

    CLI::App* calibrate = app.add_subcommand("calibrate", "Check a calibration file and print lot range intervals");
    add_scenario(calibrate);
    calibrate->add_option("-c,--calibration", calib_path, "Empty-scene CIR record file")->required();
    calibrate->add_option("-o,--output", output_path, "Write intervals as CSV lot,d_min,d_max");

    CLI::App* detect = app.add_subcommand("detect", "Run the detection pipeline and write per-epoch reports");
    add_scenario(detect);
    detect->add_option("-c,--calibration", calib_path, "Empty-scene CIR record file")->required();
    detect->add_option("-i,--input", input_path, "Measurement CIR record file")->required();
    detect->add_option("-o,--output", output_path, "Report CSV (stdout when omitted)");
    add_mode(detect);

    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Score report CSV files against the true lot");
    evaluate_cmd->add_option("-s,--scenario", scenario_path, "Scenario supplying truth_lot and reference_d_r");
    evaluate_cmd->add_option("-r,--reports", report_paths, "Report CSV files")->required();
    evaluate_cmd->add_option("--truth", truth, "True lot id ('' for an empty scene)");

    CLI::App* heatmap = app.add_subcommand("heatmap", "Rasterize one epoch's subtracted CIR into an ASCII grid");
    add_scenario(heatmap);
    heatmap->add_option("-c,--calibration", calib_path, "Empty-scene CIR record file")->required();
    heatmap->add_option("-i,--input", input_path, "Measurement CIR record file")->required();
    heatmap->add_option("-o,--output", output_path, "ESRI ASCII grid to write")->required();
    heatmap->add_option("--epoch", epoch, "Epoch to map (default: last)");
    add_mode(heatmap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            const cirsense::ScenarioConfig cfg = cirsense::load_scenario(scenario_path);
            if (!cfg.simulation) {
                throw cirsense::ConfigError("scenario has no [simulation] section");
            }
            cirsense::NoiseSpec noise = cfg.simulation->noise;
            if (snr_db) {
                noise.snr_db = *snr_db;
            }
            if (seed) {
                noise.seed = *seed;
            }
            cirsense::CirStream stream;
            stream.k_taps = cfg.constants.k_taps;
            stream.delta_t = cfg.constants.delta_t;
            // Empty and occupied runs differ in seed so their noise is independent.
            if (scene == "occupied") {
                noise.seed += 1;
            }
            stream.records = cirsense::synth_stream(cfg.scene(scene == "occupied"), cfg.simulation->settings,
                                                    epochs.value_or(cfg.simulation->epochs), noise);
            cirsense::write_cir_file(stream, output_path);
            std::printf("wrote %zu epochs to %s\n", stream.records.size(), output_path.c_str());
        } else if (calibrate->parsed()) {
            const cirsense::ScenarioConfig cfg = cirsense::load_scenario(scenario_path);
            const cirsense::CirStream calib = cirsense::read_cir_file(calib_path);
            // Same constant checks as detection, with the file as both sides.
            const auto result = cirsense::run_pipeline(cfg, calib, calib, cirsense::FilterMode::filtered);
            std::printf("calibration: %zu epochs, leading edge at tap %zu\n", calib.records.size(),
                        result.subtracted.empty() ? std::size_t{0} : result.subtracted.back().leading_edge);
            std::string csv = "lot,d_min,d_max\n";
            for (const auto& [id, interval] : result.intervals) {
                std::printf("%-8s [%.3f, %.3f] m\n", id.c_str(), interval.d_min, interval.d_max);
                csv += id + "," + std::to_string(interval.d_min) + "," + std::to_string(interval.d_max) + "\n";
            }
            if (!output_path.empty()) {
                open_output(output_path) << csv;
            }
        } else if (detect->parsed()) {
            const cirsense::ScenarioConfig cfg = cirsense::load_scenario(scenario_path);
            const auto result = cirsense::run_pipeline(cfg, cirsense::read_cir_file(calib_path),
                                                       cirsense::read_cir_file(input_path),
                                                       cirsense::parse_mode(mode_text));
            if (output_path.empty()) {
                cirsense::write_reports(std::cout, result.reports);
            } else {
                std::ofstream out = open_output(output_path);
                cirsense::write_reports(out, result.reports);
                if (result.summary) {
                    print_summary(*result.summary);
                }
            }
        } else if (evaluate_cmd->parsed()) {
            std::optional<cirsense::ScenarioConfig> cfg;
            if (!scenario_path.empty()) {
                cfg = cirsense::load_scenario(scenario_path);
            }
            std::string truth_lot;
            if (truth) {
                truth_lot = *truth;
            } else if (cfg && cfg->truth_lot) {
                truth_lot = *cfg->truth_lot;
            } else {
                throw cirsense::ConfigError("no truth lot: pass --truth or a scenario with [evaluation] truth_lot");
            }
            std::vector<cirsense::OccupancyReport> reports;
            for (const std::string& path : report_paths) {
                std::ifstream in(path);
                if (!in) {
                    throw cirsense::Error("cannot open " + path);
                }
                auto part = cirsense::read_reports(in);
                reports.insert(reports.end(), part.begin(), part.end());
            }
            print_summary(cirsense::evaluate(reports, truth_lot, cfg ? cfg->reference_d_r : std::nullopt));
        } else if (heatmap->parsed()) {
            const cirsense::ScenarioConfig cfg = cirsense::load_scenario(scenario_path);
            const auto result = cirsense::run_pipeline(cfg, cirsense::read_cir_file(calib_path),
                                                       cirsense::read_cir_file(input_path),
                                                       cirsense::parse_mode(mode_text));
            std::size_t index = result.reports.size() - 1;
            if (epoch) {
                const auto it = std::find_if(result.reports.begin(), result.reports.end(),
                                             [&](const auto& r) { return r.epoch == *epoch; });
                if (it == result.reports.end()) {
                    throw cirsense::InsufficientData("epoch " + std::to_string(*epoch) + " has no filtered output");
                }
                index = static_cast<std::size_t>(it - result.reports.begin());
            }
            const cirsense::GridSpec spec = cirsense::grid_for_site(cfg.geometry, cfg.constants.cell_size, 1.0,
                                                                    cfg.constants.fill_radius);
            const cirsense::HeatGrid grid = cirsense::build_heatmap(result.subtracted[index], cfg.geometry, spec);
            std::ofstream out = open_output(output_path);
            cirsense::write_heatmap(out, grid);
            const cirsense::Point2 hot = grid.argmax();
            std::printf("epoch %llu: hottest cell at (%.2f, %.2f) m\n",
                        static_cast<unsigned long long>(result.reports[index].epoch), hot.x, hot.y);
        }
    } catch (const cirsense::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return 0;
}
