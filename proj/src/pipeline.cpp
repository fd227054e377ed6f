#include "cirsense/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "cirsense/errors.hpp"

namespace cirsense {

namespace {

void check_constants(const CirStream& stream, const PipelineConstants& constants, const char* which) {
    if (stream.k_taps != constants.k_taps) {
        throw ConstantMismatch(std::string(which) + " has k=" + std::to_string(stream.k_taps) +
                               " but the scenario expects " + std::to_string(constants.k_taps));
    }
    if (std::fabs(stream.delta_t - constants.delta_t) > 1e-9 * constants.delta_t) {
        throw ConstantMismatch(std::string(which) + " tap duration differs from the scenario");
    }
}

}  // namespace

FilteredStream filter_stream(const CirStream& stream, const PipelineConstants& constants, FilterMode mode) {
    std::vector<MagnitudeProfile> raw;
    std::vector<std::uint64_t> epochs;
    raw.reserve(stream.records.size());
    for (const Cir& cir : stream.records) {
        validate(cir, stream.k_taps);
        raw.push_back(magnitude(cir));
        epochs.push_back(cir.epoch);
    }
    if (mode == FilterMode::unfiltered) {
        return {std::move(raw), std::move(epochs)};
    }
    FilteredStream out;
    out.profiles = ewma_run(raw, constants.alpha, constants.warmup_k);
    out.epochs.assign(epochs.begin() + static_cast<std::ptrdiff_t>(constants.warmup_k - 1), epochs.end());
    return out;
}

PipelineResult run_pipeline(const ScenarioConfig& config, const CirStream& calibration, const CirStream& input,
                            FilterMode mode) {
    validate(config);
    const PipelineConstants& k = config.constants;
    check_constants(calibration, k, "calibration");
    check_constants(input, k, "input");
    if (calibration.records.empty() || input.records.empty()) {
        throw InsufficientData("calibration and input need at least one epoch each");
    }

    const FilteredStream reference = filter_stream(calibration, k, mode);
    const FilteredStream measured = filter_stream(input, k, mode);

    PipelineResult result;
    const SiteGeometry& geom = config.geometry;
    const double d_p = direct_path_length(geom);
    result.intervals = lot_intervals(geom, k.tap_length_m(geom.c));
    result.reports.reserve(measured.profiles.size());
    result.subtracted.reserve(measured.profiles.size());

    for (std::size_t j = 0; j < measured.profiles.size(); ++j) {
        const MagnitudeProfile& z0 = reference.profiles[std::min(j, reference.profiles.size() - 1)];
        OccupancyReport report;
        report.epoch = measured.epochs[j];
        report.mode = mode;
        SubtractedProfile sub;
        try {
            sub = background_subtract(measured.profiles[j], z0, k.leading_edge_fraction);
        } catch (const AlignmentError&) {
            // An all-zero epoch carries no information; report it as unassigned.
            sub.values.assign(k.k_taps, 0.0);
            sub.delta_t = k.delta_t;
            result.reports.push_back(report);
            result.subtracted.push_back(std::move(sub));
            continue;
        }
        report.estimate = estimate_reflection(sub, d_p, k.guard_taps, k.min_amplitude, geom.c);
        if (report.estimate) {
            report.verdict = assign_lot(*report.estimate, result.intervals);
        }
        result.reports.push_back(std::move(report));
        result.subtracted.push_back(std::move(sub));
    }

    if (config.truth_lot) {
        result.summary = evaluate(result.reports, *config.truth_lot, config.reference_d_r);
    }
    return result;
}

}  // namespace cirsense
