#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cirsense/filtering.hpp"
#include "cirsense/geometry.hpp"

namespace cirsense {

inline constexpr std::size_t kDefaultGuardTaps = 3;
/// On the normalized-difference scale, where residuals lie in [0, 2].
inline constexpr double kDefaultMinAmplitude = 0.2;

struct ReflectionEstimate {
    double d_r_est{0.0};
    double amplitude{0.0};
    std::size_t tap{0};
};

/// Strongest residual at least `guard_taps` after the leading edge, or nothing when that
/// residual is weaker than `min_amplitude`.
[[nodiscard]] std::optional<ReflectionEstimate> estimate_reflection(const SubtractedProfile& sub, double d_p,
                                                                    std::size_t guard_taps = kDefaultGuardTaps,
                                                                    double min_amplitude = kDefaultMinAmplitude,
                                                                    double c = kSpeedOfLight);

/// Strongest residual over the whole profile from the leading edge on, ignoring the guard.
/// Lets callers tell a widened direct-path peak from a separable reflection.
[[nodiscard]] std::size_t residual_peak_tap(const SubtractedProfile& sub);

enum class VerdictKind { none, lot, ambiguous };

struct LotVerdict {
    VerdictKind kind{VerdictKind::none};
    /// Set for VerdictKind::lot.
    std::string lot;
    /// Every lot whose interval contains the estimate (one entry for `lot`, several for `ambiguous`).
    std::vector<std::string> candidates;
};

[[nodiscard]] LotVerdict assign_lot(const ReflectionEstimate& est, const std::map<std::string, RangeInterval>& intervals);

enum class FilterMode { filtered, unfiltered };

[[nodiscard]] std::string to_string(FilterMode mode);
[[nodiscard]] FilterMode parse_mode(const std::string& text);

struct OccupancyReport {
    std::uint64_t epoch{0};
    LotVerdict verdict;
    std::optional<ReflectionEstimate> estimate;
    FilterMode mode{FilterMode::filtered};

    /// The assigned lot, only when the estimate fell inside exactly one interval.
    [[nodiscard]] std::optional<std::string> lot() const {
        return verdict.kind == VerdictKind::lot ? std::optional<std::string>(verdict.lot) : std::nullopt;
    }
};

struct DetectionSummary {
    /// Share of reports per mode whose lot equals the truth.
    std::map<FilterMode, double> ratio;
    std::map<FilterMode, std::size_t> report_count;
    /// d_r_est - reference per report, in input order; empty entries for reports without an estimate.
    std::vector<std::optional<double>> residuals;
};

/// `truth` may be empty for an unoccupied scene: a report is then correct when it names no lot.
[[nodiscard]] DetectionSummary evaluate(std::span<const OccupancyReport> reports, const std::string& truth,
                                        std::optional<double> reference_d_r = std::nullopt);

}  // namespace cirsense
