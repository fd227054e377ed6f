#include "cirsense/cir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cirsense/errors.hpp"

namespace cirsense {

void validate(const Cir& cir, std::size_t expected_taps) {
    if (!(cir.delta_t > 0.0) || !std::isfinite(cir.delta_t)) {
        throw RejectedInput("CIR delta_t must be positive and finite");
    }
    if (expected_taps != 0 && cir.taps.size() != expected_taps) {
        throw RejectedInput("CIR has " + std::to_string(cir.taps.size()) + " taps, expected " +
                            std::to_string(expected_taps));
    }
    for (std::size_t k = 0; k < cir.taps.size(); ++k) {
        if (!std::isfinite(cir.taps[k].i) || !std::isfinite(cir.taps[k].q)) {
            throw RejectedInput("non-finite CIR tap at index " + std::to_string(k));
        }
    }
}

MagnitudeProfile magnitude(const Cir& cir) {
    validate(cir);
    MagnitudeProfile out;
    out.delta_t = cir.delta_t;
    out.values.reserve(cir.taps.size());
    for (const ComplexTap& tap : cir.taps) {
        out.values.push_back(std::hypot(tap.i, tap.q));
    }
    return out;
}

namespace {

double max_value(const std::vector<double>& values) {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void require_finite(const MagnitudeProfile& profile) {
    for (double v : profile.values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw RejectedInput("magnitude profile values must be finite and non-negative");
        }
    }
}

}  // namespace

MagnitudeProfile normalize(MagnitudeProfile profile) {
    require_finite(profile);
    const double peak = max_value(profile.values);
    if (peak <= 0.0) {
        profile.degenerate = true;
        return profile;
    }
    for (double& v : profile.values) {
        v /= peak;
    }
    profile.normalized = true;
    profile.degenerate = false;
    return profile;
}

std::size_t leading_edge_index(const MagnitudeProfile& profile, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw RejectedInput("leading-edge fraction must lie in (0, 1]");
    }
    const double peak = max_value(profile.values);
    if (!(peak > 0.0)) {
        throw NoLeadingEdge("profile has no positive value");
    }
    const double threshold = fraction * peak;
    const auto it = std::find_if(profile.values.begin(), profile.values.end(),
                                 [threshold](double v) { return v >= threshold; });
    return static_cast<std::size_t>(it - profile.values.begin());
}

MagnitudeProfile shift(const MagnitudeProfile& profile, std::ptrdiff_t taps) {
    MagnitudeProfile out = profile;
    const auto n = static_cast<std::ptrdiff_t>(profile.values.size());
    std::fill(out.values.begin(), out.values.end(), 0.0);
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::ptrdiff_t dst = k + taps;
        if (dst >= 0 && dst < n) {
            out.values[static_cast<std::size_t>(dst)] = profile.values[static_cast<std::size_t>(k)];
        }
    }
    if (profile.leading_edge) {
        const auto le = static_cast<std::ptrdiff_t>(*profile.leading_edge) + taps;
        out.leading_edge = (le >= 0 && le < n) ? std::optional<std::size_t>(static_cast<std::size_t>(le))
                                               : std::nullopt;
    }
    return out;
}

MagnitudeProfile align(const MagnitudeProfile& profile, const MagnitudeProfile& reference, double fraction) {
    if (profile.size() != reference.size()) {
        throw AlignmentError("profiles differ in length");
    }
    std::size_t own_edge = 0;
    std::size_t ref_edge = 0;
    try {
        own_edge = leading_edge_index(profile, fraction);
        ref_edge = leading_edge_index(reference, fraction);
    } catch (const NoLeadingEdge& e) {
        throw AlignmentError(std::string("cannot align: ") + e.what());
    }
    MagnitudeProfile out =
        shift(profile, static_cast<std::ptrdiff_t>(ref_edge) - static_cast<std::ptrdiff_t>(own_edge));
    out.leading_edge = ref_edge;
    return out;
}

}  // namespace cirsense
