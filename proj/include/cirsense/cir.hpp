#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace cirsense {

inline constexpr std::size_t kDefaultTaps = 992;
inline constexpr double kSpeedOfLight = 299792458.0;
/// Accumulator tap spacing of a 499.2 MHz channel, 1 / (2 * 499.2 MHz). One tap is ~0.30 m.
inline constexpr double kDefaultDeltaT = 1.0 / (2.0 * 499.2e6);
inline constexpr double kDefaultLeadingEdgeFraction = 0.5;

struct ComplexTap {
    double i{0.0};
    double q{0.0};
};

/// One epoch's channel impulse response. Tap k sits at k * delta_t after record start.
struct Cir {
    std::vector<ComplexTap> taps;
    double delta_t{kDefaultDeltaT};
    std::uint64_t epoch{0};
    std::uint32_t tx_id{0};
    std::uint32_t rx_id{0};
};

/// Throws RejectedInput unless taps are finite, delta_t > 0 and, when expected_taps is
/// non-zero, the record has exactly that many taps.
void validate(const Cir& cir, std::size_t expected_taps = 0);

struct MagnitudeProfile {
    std::vector<double> values;
    double delta_t{kDefaultDeltaT};
    std::optional<std::size_t> leading_edge;
    bool normalized{false};
    /// Set by normalize() on an all-zero profile. Downstream stages reject these.
    bool degenerate{false};

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

[[nodiscard]] MagnitudeProfile magnitude(const Cir& cir);

/// Divides by the maximum so the peak is exactly 1. All-zero input comes back unchanged
/// with `degenerate` set.
[[nodiscard]] MagnitudeProfile normalize(MagnitudeProfile profile);

/// Smallest tap whose value reaches fraction * max, i.e. the rising flank of the first
/// dominant peak. Throws NoLeadingEdge for an all-zero profile.
[[nodiscard]] std::size_t leading_edge_index(const MagnitudeProfile& profile,
                                             double fraction = kDefaultLeadingEdgeFraction);

/// Moves every value by `taps` positions (positive = later), zero-filling vacated taps.
[[nodiscard]] MagnitudeProfile shift(const MagnitudeProfile& profile, std::ptrdiff_t taps);

/// Shifts `profile` so its leading edge coincides with the reference's. The result records
/// the reference leading edge. Throws AlignmentError if either profile has none.
[[nodiscard]] MagnitudeProfile align(const MagnitudeProfile& profile, const MagnitudeProfile& reference,
                                     double fraction = kDefaultLeadingEdgeFraction);

}  // namespace cirsense
