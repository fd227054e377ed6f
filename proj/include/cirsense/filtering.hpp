#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cirsense/cir.hpp"

namespace cirsense {

inline constexpr double kDefaultAlpha = 0.3;
inline constexpr std::size_t kDefaultWarmup = 5;

/// Running exponentially weighted average z_t of one (tx, rx) magnitude stream.
struct EwmaState {
    MagnitudeProfile current;
    double alpha{kDefaultAlpha};
    std::size_t epochs_seen{0};
};

/// Starts a filter at `initial` (counts as one epoch seen).
[[nodiscard]] EwmaState make_ewma_state(MagnitudeProfile initial, double alpha = kDefaultAlpha);

/// z_t = alpha * h_t + (1 - alpha) * z_{t-1}, tap by tap.
[[nodiscard]] EwmaState ewma_update(EwmaState state, const MagnitudeProfile& h);

/// Filters a whole stream. The first output is the mean of the first `warmup_k` profiles
/// (emitted at epoch warmup_k - 1); every later epoch applies one ewma_update. The output
/// therefore holds stream.size() - warmup_k + 1 profiles.
[[nodiscard]] std::vector<MagnitudeProfile> ewma_run(std::span<const MagnitudeProfile> stream,
                                                     double alpha = kDefaultAlpha,
                                                     std::size_t warmup_k = kDefaultWarmup);

/// |z1 - z0| after leading-edge alignment and normalization of both sides.
struct SubtractedProfile {
    std::vector<double> values;
    double delta_t{kDefaultDeltaT};
    std::size_t leading_edge{0};

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Aligns `measured` onto `reference`, normalizes both and takes the elementwise absolute
/// difference. The leading edge is inherited from the reference.
[[nodiscard]] SubtractedProfile background_subtract(const MagnitudeProfile& measured,
                                                    const MagnitudeProfile& reference,
                                                    double fraction = kDefaultLeadingEdgeFraction);

}  // namespace cirsense
