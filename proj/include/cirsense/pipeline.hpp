#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cirsense/config.hpp"
#include "cirsense/detection.hpp"
#include "cirsense/io.hpp"

namespace cirsense {

struct PipelineResult {
    std::vector<OccupancyReport> reports;
    /// One subtracted profile per report, same order.
    std::vector<SubtractedProfile> subtracted;
    std::map<std::string, RangeInterval> intervals;
    /// Present when the scenario names a truth lot.
    std::optional<DetectionSummary> summary;
};

/// Filters `stream` per `mode`: EWMA with warm-up, or the raw magnitudes. Returns the
/// filtered profiles and the epoch each one belongs to.
struct FilteredStream {
    std::vector<MagnitudeProfile> profiles;
    std::vector<std::uint64_t> epochs;
};
[[nodiscard]] FilteredStream filter_stream(const CirStream& stream, const PipelineConstants& constants,
                                           FilterMode mode);

/// CIR -> EWMA -> background subtraction -> elliptical model -> lot assignment.
///
/// Calibration and measurement go through the same filter. Filtered measurement output j is
/// compared with filtered calibration output j (the last calibration output once the
/// calibration stream runs out), so feeding the calibration file as input subtracts each
/// epoch from itself.
[[nodiscard]] PipelineResult run_pipeline(const ScenarioConfig& config, const CirStream& calibration,
                                          const CirStream& input, FilterMode mode);

}  // namespace cirsense
