#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cirsense/cir.hpp"
#include "cirsense/geometry.hpp"

namespace cirsense {

enum class PulseKind { gaussian, raised_cosine };

/// Channel bandwidth of the transmitted pulse.
inline constexpr double kDefaultBandwidth = 499.2e6;
/// Roll-off of the raised-cosine pulse.
inline constexpr double kRaisedCosineRolloff = 0.5;

/// Transmit pulse s(t) of a given bandwidth B. The Gaussian's power spectrum is B wide at
/// -3 dB; the raised cosine has symbol period 1/B. Sampled at tap spacing the pulse has unit
/// energy.
class PulseShape {
public:
    explicit PulseShape(PulseKind kind = PulseKind::gaussian, double bandwidth = kDefaultBandwidth,
                        double delta_t = kDefaultDeltaT);

    [[nodiscard]] PulseKind kind() const noexcept { return kind_; }
    [[nodiscard]] double bandwidth() const noexcept { return bandwidth_; }
    [[nodiscard]] double delta_t() const noexcept { return delta_t_; }

    /// Energy-normalized pulse value `offset_taps` taps from its center (fractional allowed).
    [[nodiscard]] double at(double offset_taps) const;
    /// Value at the center tap.
    [[nodiscard]] double peak() const { return at(0.0); }
    /// Half support in taps; the pulse is zero beyond it.
    [[nodiscard]] double half_support_taps() const noexcept { return half_support_ / delta_t_; }

private:
    [[nodiscard]] double shape(double t_seconds) const;
    [[nodiscard]] double gaussian_sigma() const;

    PulseKind kind_;
    double bandwidth_;
    double delta_t_;
    double half_support_{0.0};
    double gain_{1.0};
};

/// Point scatterer. A double-bounce partner adds the path tx -> position -> partner -> rx.
struct Reflector {
    Point2 position;
    double reflectivity{1.0};
    std::optional<Point2> double_bounce_partner;
    double partner_reflectivity{1.0};
};

struct NoiseSpec {
    /// Direct-path peak power over complex noise power per tap; +inf disables noise.
    double snr_db{std::numeric_limits<double>::infinity()};
    std::uint64_t seed{0};
};

struct SimulationSettings {
    std::size_t k_taps{kDefaultTaps};
    double delta_t{kDefaultDeltaT};
    /// Tap at which the direct path is centered.
    std::size_t direct_offset_taps{16};
    PulseKind pulse{PulseKind::gaussian};
    double bandwidth{kDefaultBandwidth};
    std::uint32_t tx_id{0};
    std::uint32_t rx_id{1};
};

/// One propagation path before pulse shaping: center position in (fractional) taps and
/// real amplitude.
struct PathComponent {
    double delay_taps{0.0};
    double amplitude{0.0};
    double length_m{0.0};
};

/// Paths the simulator renders: the direct path first, then every unblocked single bounce
/// (amplitude reflectivity / (d1 * d2)) and double bounce (product of both reflectivities over
/// the product of the three legs). Reflector legs crossing an obstacle are dropped.
[[nodiscard]] std::vector<PathComponent> path_components(const SiteGeometry& geom,
                                                         const std::vector<Reflector>& reflectors,
                                                         const SimulationSettings& settings);

/// Pulse-shaped CIR for one epoch. Phases and noise are drawn from (noise.seed, epoch), so any
/// epoch can be regenerated independently.
[[nodiscard]] Cir synth_cir(const SiteGeometry& geom, const std::vector<Reflector>& reflectors,
                            const SimulationSettings& settings, const NoiseSpec& noise, std::uint64_t epoch = 0);

struct Scene {
    SiteGeometry geometry;
    std::vector<Reflector> reflectors;
};

/// `epochs` CIRs with epoch indices 0..epochs-1.
[[nodiscard]] std::vector<Cir> synth_stream(const Scene& scene, const SimulationSettings& settings,
                                            std::size_t epochs, const NoiseSpec& noise);

}  // namespace cirsense
