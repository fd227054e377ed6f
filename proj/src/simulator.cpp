#include "cirsense/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cirsense/errors.hpp"

namespace cirsense {

PulseShape::PulseShape(PulseKind kind, double bandwidth, double delta_t)
    : kind_(kind), bandwidth_(bandwidth), delta_t_(delta_t) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw RejectedInput("pulse bandwidth must be positive");
    }
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
        throw RejectedInput("pulse sampling period must be positive");
    }
    // Five standard deviations of the Gaussian; four symbol periods of the raised cosine.
    half_support_ = kind_ == PulseKind::gaussian ? 5.0 * gaussian_sigma() : 4.0 / bandwidth_;
    const auto half = static_cast<long>(std::floor(half_support_taps()));
    double energy = 0.0;
    for (long n = -half; n <= half; ++n) {
        const double v = shape(static_cast<double>(n) * delta_t_);
        energy += v * v;
    }
    gain_ = 1.0 / std::sqrt(energy);
}

double PulseShape::gaussian_sigma() const {
    // exp(-t^2 / 2 sigma^2) has power spectrum exp(-4 pi^2 sigma^2 f^2), which is
    // half its peak at |f| = B / 2.
    return std::sqrt(std::numbers::ln2) / (std::numbers::pi * bandwidth_);
}

double PulseShape::shape(double t) const {
    if (std::fabs(t) > half_support_) {
        return 0.0;
    }
    if (kind_ == PulseKind::gaussian) {
        const double sigma = gaussian_sigma();
        return std::exp(-t * t / (2.0 * sigma * sigma));
    }
    const double x = t * bandwidth_;
    const double beta = kRaisedCosineRolloff;
    const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double denom = 1.0 - 4.0 * beta * beta * x * x;
    if (std::fabs(denom) < 1e-12) {
        return std::numbers::pi / 4.0 * sinc;
    }
    return sinc * std::cos(std::numbers::pi * beta * x) / denom;
}

double PulseShape::at(double offset_taps) const {
    return gain_ * shape(offset_taps * delta_t_);
}

namespace {

/// Leg a -> p, stopping just short of p so a reflector on an obstacle surface stays visible.
bool leg_blocked(const SiteGeometry& geom, Point2 a, Point2 p) {
    const double len = distance(a, p);
    if (len <= 0.0) {
        return false;
    }
    const double keep = std::max(0.0, 1.0 - 1e-6 / len);
    const Point2 end = a + keep * (p - a);
    for (const Rect& r : geom.obstacles) {
        if (segment_intersects(a, end, r)) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<PathComponent> path_components(const SiteGeometry& geom, const std::vector<Reflector>& reflectors,
                                           const SimulationSettings& settings) {
    validate(geom);
    if (!(settings.delta_t > 0.0)) {
        throw RejectedInput("delta_t must be positive");
    }
    const double d_p = direct_path_length(geom);
    const double tap_m = settings.delta_t * geom.c;
    const auto offset = static_cast<double>(settings.direct_offset_taps);
    const auto delay_of = [&](double length) { return offset + (length - d_p) / tap_m; };

    std::vector<PathComponent> paths;
    paths.push_back({offset, 1.0 / d_p, d_p});
    for (const Reflector& r : reflectors) {
        if (!std::isfinite(r.reflectivity) || r.reflectivity < 0.0) {
            throw RejectedInput("reflectivity must be finite and non-negative");
        }
        const double d1 = distance(geom.tx, r.position);
        const double d2 = distance(geom.rx, r.position);
        if (d1 > 0.0 && d2 > 0.0 && !leg_blocked(geom, geom.tx, r.position) &&
            !leg_blocked(geom, geom.rx, r.position)) {
            paths.push_back({delay_of(d1 + d2), r.reflectivity / (d1 * d2), d1 + d2});
        }
        if (r.double_bounce_partner) {
            const Point2 q = *r.double_bounce_partner;
            const double hop = distance(r.position, q);
            const double d3 = distance(q, geom.rx);
            const bool blocked = leg_blocked(geom, geom.tx, r.position) || leg_blocked(geom, q, r.position) ||
                                 leg_blocked(geom, r.position, q) || leg_blocked(geom, geom.rx, q);
            if (d1 > 0.0 && hop > 0.0 && d3 > 0.0 && !blocked) {
                const double length = d1 + hop + d3;
                paths.push_back({delay_of(length), r.reflectivity * r.partner_reflectivity / (d1 * hop * d3), length});
            }
        }
    }
    for (const PathComponent& p : paths) {
        if (p.delay_taps >= static_cast<double>(settings.k_taps)) {
            throw TruncationError("path of " + std::to_string(p.length_m) + " m lies beyond the " +
                                  std::to_string(settings.k_taps) + "-tap record");
        }
    }
    return paths;
}

Cir synth_cir(const SiteGeometry& geom, const std::vector<Reflector>& reflectors, const SimulationSettings& settings,
              const NoiseSpec& noise, std::uint64_t epoch) {
    const std::vector<PathComponent> paths = path_components(geom, reflectors, settings);
    const PulseShape pulse(settings.pulse, settings.bandwidth, settings.delta_t);

    std::seed_seq seq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                      static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);

    Cir cir;
    cir.taps.assign(settings.k_taps, ComplexTap{});
    cir.delta_t = settings.delta_t;
    cir.epoch = epoch;
    cir.tx_id = settings.tx_id;
    cir.rx_id = settings.rx_id;

    const double reach = pulse.half_support_taps();
    for (const PathComponent& path : paths) {
        const double phase = phase_dist(rng);
        const double cp = std::cos(phase);
        const double sp = std::sin(phase);
        const auto lo = static_cast<long>(std::max(0.0, std::ceil(path.delay_taps - reach)));
        const auto hi = static_cast<long>(
            std::min(static_cast<double>(settings.k_taps) - 1.0, std::floor(path.delay_taps + reach)));
        for (long k = lo; k <= hi; ++k) {
            const double v = path.amplitude * pulse.at(static_cast<double>(k) - path.delay_taps);
            cir.taps[static_cast<std::size_t>(k)].i += v * cp;
            cir.taps[static_cast<std::size_t>(k)].q += v * sp;
        }
    }

    if (std::isfinite(noise.snr_db)) {
        const double peak = paths.front().amplitude * pulse.peak();
        const double sigma = peak * std::pow(10.0, -noise.snr_db / 20.0) / std::numbers::sqrt2;
        std::normal_distribution<double> gauss(0.0, sigma);
        for (ComplexTap& tap : cir.taps) {
            tap.i += gauss(rng);
            tap.q += gauss(rng);
        }
    }
    return cir;
}

std::vector<Cir> synth_stream(const Scene& scene, const SimulationSettings& settings, std::size_t epochs,
                              const NoiseSpec& noise) {
    if (epochs == 0) {
        throw RejectedInput("at least one epoch is required");
    }
    std::vector<Cir> out;
    out.reserve(epochs);
    for (std::size_t e = 0; e < epochs; ++e) {
        out.push_back(synth_cir(scene.geometry, scene.reflectors, settings, noise, e));
    }
    return out;
}

}  // namespace cirsense
