#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "cirsense/cir.hpp"
#include "cirsense/config.hpp"
#include "cirsense/geometry.hpp"
#include "cirsense/io.hpp"
#include "cirsense/simulator.hpp"

namespace cirsense::testing {

inline MagnitudeProfile profile_of(std::vector<double> values, double delta_t = kDefaultDeltaT) {
    MagnitudeProfile p;
    p.values = std::move(values);
    p.delta_t = delta_t;
    return p;
}

/// Random CIR-like magnitude profile: low noise floor plus a dominant peak and a few echoes.
inline MagnitudeProfile random_profile(std::mt19937_64& rng, std::size_t n = 128) {
    std::uniform_real_distribution<double> floor(0.0, 0.05);
    std::uniform_real_distribution<double> echo(0.05, 0.8);
    std::uniform_int_distribution<std::size_t> where(4, n / 4);
    std::vector<double> v(n);
    for (double& x : v) {
        x = floor(rng);
    }
    const std::size_t peak = where(rng);
    v[peak - 1] = 0.6;
    v[peak] = 1.0 + floor(rng);
    v[peak + 1] = 0.5;
    std::uniform_int_distribution<std::size_t> later(peak + 3, n - 1);
    for (int e = 0; e < 3; ++e) {
        v[later(rng)] = echo(rng);
    }
    return profile_of(std::move(v));
}

/// Point drawn uniformly from a disc of the given radius around the origin.
inline Point2 random_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    return {u(rng), u(rng)};
}

/// Simulated CIR stream of a scenario. Occupied runs use seed + 1, as the CLI does.
inline CirStream scenario_stream(const ScenarioConfig& cfg, bool occupied, double snr_db, std::size_t epochs,
                                 std::uint64_t seed) {
    CirStream s;
    s.k_taps = cfg.constants.k_taps;
    s.delta_t = cfg.constants.delta_t;
    s.records = synth_stream(cfg.scene(occupied), cfg.simulation->settings, epochs,
                             NoiseSpec{snr_db, occupied ? seed + 1 : seed});
    return s;
}

inline CirStream scenario_stream(const ScenarioConfig& cfg, bool occupied) {
    return scenario_stream(cfg, occupied, cfg.simulation->noise.snr_db, cfg.simulation->epochs,
                           cfg.simulation->noise.seed);
}

}  // namespace cirsense::testing
