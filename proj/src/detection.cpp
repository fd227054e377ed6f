#include "cirsense/detection.hpp"

#include "cirsense/errors.hpp"

namespace cirsense {

std::optional<ReflectionEstimate> estimate_reflection(const SubtractedProfile& sub, double d_p,
                                                      std::size_t guard_taps, double min_amplitude, double c) {
    const std::size_t first = sub.leading_edge + guard_taps;
    if (first >= sub.size()) {
        return std::nullopt;
    }
    std::size_t best = first;
    for (std::size_t k = first + 1; k < sub.size(); ++k) {
        if (sub.values[k] > sub.values[best]) {
            best = k;
        }
    }
    const double amplitude = sub.values[best];
    if (!(amplitude > 0.0) || amplitude < min_amplitude) {
        return std::nullopt;
    }
    return ReflectionEstimate{bistatic_range_of_tap(best, sub.leading_edge, d_p, sub.delta_t, c), amplitude, best};
}

std::size_t residual_peak_tap(const SubtractedProfile& sub) {
    std::size_t best = sub.leading_edge;
    for (std::size_t k = sub.leading_edge; k < sub.size(); ++k) {
        if (sub.values[k] > sub.values[best]) {
            best = k;
        }
    }
    return best;
}

LotVerdict assign_lot(const ReflectionEstimate& est, const std::map<std::string, RangeInterval>& intervals) {
    if (intervals.empty()) {
        throw RejectedInput("no lot intervals to assign against");
    }
    LotVerdict verdict;
    for (const auto& [id, interval] : intervals) {
        if (interval.contains(est.d_r_est)) {
            verdict.candidates.push_back(id);
        }
    }
    if (verdict.candidates.size() == 1) {
        verdict.kind = VerdictKind::lot;
        verdict.lot = verdict.candidates.front();
    } else if (verdict.candidates.size() > 1) {
        verdict.kind = VerdictKind::ambiguous;
    }
    return verdict;
}

std::string to_string(FilterMode mode) {
    return mode == FilterMode::filtered ? "filtered" : "unfiltered";
}

FilterMode parse_mode(const std::string& text) {
    if (text == "filtered") {
        return FilterMode::filtered;
    }
    if (text == "unfiltered") {
        return FilterMode::unfiltered;
    }
    throw RejectedInput("unknown filter mode '" + text + "'");
}

DetectionSummary evaluate(std::span<const OccupancyReport> reports, const std::string& truth,
                          std::optional<double> reference_d_r) {
    if (reports.empty()) {
        throw InsufficientData("no reports to evaluate");
    }
    DetectionSummary summary;
    std::map<FilterMode, std::size_t> correct;
    summary.residuals.reserve(reports.size());
    for (const OccupancyReport& report : reports) {
        ++summary.report_count[report.mode];
        const auto lot = report.lot();
        const bool hit = truth.empty() ? !lot.has_value() : (lot && *lot == truth);
        correct[report.mode] += hit ? 1 : 0;
        if (report.estimate && reference_d_r) {
            summary.residuals.emplace_back(report.estimate->d_r_est - *reference_d_r);
        } else {
            summary.residuals.emplace_back(std::nullopt);
        }
    }
    for (const auto& [mode, count] : summary.report_count) {
        summary.ratio[mode] = static_cast<double>(correct[mode]) / static_cast<double>(count);
    }
    return summary;
}

}  // namespace cirsense
