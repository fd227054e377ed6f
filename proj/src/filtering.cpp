#include "cirsense/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cirsense/errors.hpp"

namespace cirsense {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw RejectedInput("EWMA alpha must lie in (0, 1]");
    }
}

void check_compatible(const MagnitudeProfile& a, const MagnitudeProfile& b) {
    if (a.size() != b.size()) {
        throw StreamInconsistency("profile length " + std::to_string(b.size()) + " differs from stream length " +
                                  std::to_string(a.size()));
    }
    if (a.delta_t != b.delta_t) {
        throw StreamInconsistency("profile delta_t differs from stream delta_t");
    }
}

}  // namespace

EwmaState make_ewma_state(MagnitudeProfile initial, double alpha) {
    check_alpha(alpha);
    for (double v : initial.values) {
        if (!std::isfinite(v)) {
            throw RejectedInput("EWMA initial profile must be finite");
        }
    }
    initial.leading_edge.reset();
    return EwmaState{std::move(initial), alpha, 1};
}

EwmaState ewma_update(EwmaState state, const MagnitudeProfile& h) {
    check_alpha(state.alpha);
    check_compatible(state.current, h);
    std::vector<double>& z = state.current.values;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double prev = z[k];
        const double next = h.values[k];
        // prev + alpha * (next - prev) keeps a constant stream exactly fixed; the clamp pins the
        // result inside [prev, next] against rounding.
        z[k] = std::clamp(prev + state.alpha * (next - prev), std::min(prev, next), std::max(prev, next));
    }
    state.current.normalized = false;
    state.current.degenerate = false;
    state.current.leading_edge.reset();
    ++state.epochs_seen;
    return state;
}

std::vector<MagnitudeProfile> ewma_run(std::span<const MagnitudeProfile> stream, double alpha,
                                       std::size_t warmup_k) {
    check_alpha(alpha);
    if (warmup_k == 0) {
        throw RejectedInput("EWMA warm-up length must be at least 1");
    }
    if (stream.size() < warmup_k) {
        throw InsufficientData("stream of " + std::to_string(stream.size()) + " epochs is shorter than warm-up " +
                               std::to_string(warmup_k));
    }

    // Incremental mean so a constant warm-up window reproduces the constant exactly.
    MagnitudeProfile mean = stream.front();
    for (std::size_t n = 1; n < warmup_k; ++n) {
        check_compatible(mean, stream[n]);
        const double weight = 1.0 / static_cast<double>(n + 1);
        for (std::size_t k = 0; k < mean.values.size(); ++k) {
            mean.values[k] += (stream[n].values[k] - mean.values[k]) * weight;
        }
    }

    std::vector<MagnitudeProfile> out;
    out.reserve(stream.size() - warmup_k + 1);
    EwmaState state = make_ewma_state(std::move(mean), alpha);
    state.epochs_seen = warmup_k;
    out.push_back(state.current);
    for (std::size_t t = warmup_k; t < stream.size(); ++t) {
        state = ewma_update(std::move(state), stream[t]);
        out.push_back(state.current);
    }
    return out;
}

SubtractedProfile background_subtract(const MagnitudeProfile& measured, const MagnitudeProfile& reference,
                                      double fraction) {
    if (measured.size() != reference.size() || measured.delta_t != reference.delta_t) {
        throw StreamInconsistency("measured and reference profiles are incompatible");
    }
    if (measured.degenerate || reference.degenerate) {
        throw AlignmentError("cannot subtract a degenerate profile");
    }
    const MagnitudeProfile aligned = normalize(align(measured, reference, fraction));
    const MagnitudeProfile anchor = normalize(reference);

    SubtractedProfile out;
    out.delta_t = reference.delta_t;
    out.leading_edge = leading_edge_index(reference, fraction);
    out.values.resize(reference.size());
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = std::fabs(aligned.values[k] - anchor.values[k]);
    }
    return out;
}

}  // namespace cirsense
