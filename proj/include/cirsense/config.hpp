#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cirsense/detection.hpp"
#include "cirsense/filtering.hpp"
#include "cirsense/geometry.hpp"
#include "cirsense/simulator.hpp"

namespace cirsense {

/// Processing constants shared by calibration and measurement.
struct PipelineConstants {
    std::size_t k_taps{kDefaultTaps};
    double delta_t{kDefaultDeltaT};
    double alpha{kDefaultAlpha};
    std::size_t warmup_k{kDefaultWarmup};
    double leading_edge_fraction{kDefaultLeadingEdgeFraction};
    std::size_t guard_taps{kDefaultGuardTaps};
    double min_amplitude{kDefaultMinAmplitude};
    double cell_size{kDefaultCellSize};
    std::size_t fill_radius{kDefaultFillRadius};

    [[nodiscard]] double tap_length_m(double c) const { return delta_t * c; }
};

struct SimulationConfig {
    SimulationSettings settings;
    NoiseSpec noise;
    std::size_t epochs{300};
    /// Present in both the empty and the occupied scene.
    std::vector<Reflector> static_reflectors;
    /// Present only in the occupied scene (the parked vehicle).
    std::vector<Reflector> target_reflectors;
    /// Obstacles present only in the occupied scene (the vehicle body).
    std::vector<Rect> target_obstacles;
};

struct ScenarioConfig {
    std::string name;
    /// Obstacles listed here are the static ones.
    SiteGeometry geometry;
    PipelineConstants constants;
    std::optional<SimulationConfig> simulation;
    std::optional<std::string> truth_lot;
    std::optional<double> reference_d_r;

    /// Geometry plus reflectors of the empty (calibration) or occupied scene.
    [[nodiscard]] Scene scene(bool occupied) const;
};

/// Parses the INI-style scenario format (see README.md). Throws ConfigError.
[[nodiscard]] ScenarioConfig parse_scenario(std::istream& in);
[[nodiscard]] ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Range checks on every constant plus referenced lot ids.
void validate(const ScenarioConfig& config);

}  // namespace cirsense
