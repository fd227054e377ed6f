#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cirsense/cir.hpp"
#include "cirsense/errors.hpp"
#include "cirsense/simulator.hpp"

using namespace cirsense;

namespace {

SiteGeometry side_site() {
    SiteGeometry g;
    g.tx = {0.0, 0.0};
    g.rx = {3.2, 0.0};
    return g;
}

std::size_t count_local_maxima(const std::vector<double>& v, double floor) {
    std::size_t n = 0;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        if (v[k] > floor && v[k] > v[k - 1] && v[k] >= v[k + 1]) {
            ++n;
        }
    }
    return n;
}

std::size_t argmax_after(const std::vector<double>& v, std::size_t from) {
    return static_cast<std::size_t>(std::max_element(v.begin() + static_cast<std::ptrdiff_t>(from), v.end()) -
                                    v.begin());
}

}  // namespace

TEST_CASE("pulse shapes have unit discrete energy") {
    for (PulseKind kind : {PulseKind::gaussian, PulseKind::raised_cosine}) {
        const PulseShape p(kind);
        double energy = 0.0;
        const auto reach = static_cast<int>(std::floor(p.half_support_taps()));
        for (int k = -reach; k <= reach; ++k) {
            energy += p.at(k) * p.at(k);
        }
        CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.at(p.half_support_taps() + 0.1) == 0.0);
        CHECK(p.at(0.7) == doctest::Approx(p.at(-0.7)).epsilon(1e-15));
    }
    // Time-bandwidth product of the Gaussian: sigma_t = sqrt(ln 2) / (pi B), so the power
    // envelope is at half its peak sqrt(ln 2) sigma_t from the center.
    const PulseShape g(PulseKind::gaussian);
    const double half_power_taps = std::log(2.0) / (std::numbers::pi * kDefaultBandwidth * kDefaultDeltaT);
    CHECK(std::pow(g.at(half_power_taps) / g.peak(), 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half_power_taps * 2.0 * kDefaultDeltaT == doctest::Approx(0.884e-9).epsilon(1e-3));
}

TEST_CASE("a scene without reflectors renders only the direct path") {
    SimulationSettings settings;
    const Cir cir = synth_cir(side_site(), {}, settings, NoiseSpec{}, 0);
    REQUIRE(cir.taps.size() == kDefaultTaps);
    const MagnitudeProfile m = magnitude(cir);
    CHECK(count_local_maxima(m.values, 0.0) == 1);
    CHECK(argmax_after(m.values, 0) == settings.direct_offset_taps);
    const PulseShape pulse;
    CHECK(std::fabs(m.values[settings.direct_offset_taps] - pulse.peak() / 3.2) < 1e-12);
    const double reach = pulse.half_support_taps();
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (std::fabs(static_cast<double>(k) - 16.0) > reach) {
            CHECK(m.values[k] == 0.0);
        }
    }
}

TEST_CASE("a reflector adds a pulse at its excess delay") {
    SimulationSettings settings;
    const Reflector car{{1.6, 3.0}, 2.5, std::nullopt, 1.0};
    const auto paths = path_components(side_site(), {car}, settings);
    REQUIRE(paths.size() == 2);
    CHECK(paths[1].length_m == doctest::Approx(6.8).epsilon(1e-14));
    CHECK(paths[1].amplitude == doctest::Approx(2.5 / (3.4 * 3.4)).epsilon(1e-14));
    // 3.6 m of excess path is 11.989 taps.
    CHECK(std::fabs(paths[1].delay_taps - 16.0 - 11.98909) < 1e-4);

    const MagnitudeProfile m = magnitude(synth_cir(side_site(), {car}, settings, NoiseSpec{}, 0));
    CHECK(argmax_after(m.values, 16 + 6) == 28);
}

TEST_CASE("double bounces follow the three-leg amplitude law") {
    SimulationSettings settings;
    const Reflector pair{{1.6, 5.7}, 4.0, Point2{1.6, -3.0}, 4.0};
    const auto paths = path_components(side_site(), {pair}, settings);
    REQUIRE(paths.size() == 3);
    const double d1 = std::hypot(1.6, 5.7);
    const double d3 = std::hypot(1.6, 3.0);
    CHECK(paths[2].length_m == doctest::Approx(d1 + 8.7 + d3).epsilon(1e-14));
    CHECK(paths[2].amplitude == doctest::Approx(16.0 / (d1 * 8.7 * d3)).epsilon(1e-14));
}

TEST_CASE("obstacles shadow reflector legs") {
    SiteGeometry g = side_site();
    const Reflector pillar{{1.6, 6.0}, 3.0, std::nullopt, 1.0};
    SimulationSettings settings;
    CHECK(path_components(g, {pillar}, settings).size() == 2);
    g.obstacles.push_back({0.5, 2.0, 2.7, 4.0});
    CHECK(path_components(g, {pillar}, settings).size() == 1);

    // A reflector on the obstacle's own surface is still seen.
    const Reflector bumper{{1.6, 2.0}, 3.0, std::nullopt, 1.0};
    CHECK(path_components(g, {bumper}, settings).size() == 2);

    const MagnitudeProfile m = magnitude(synth_cir(g, {pillar}, settings, NoiseSpec{}, 0));
    CHECK(count_local_maxima(m.values, 0.0) == 1);
}

TEST_CASE("paths beyond the record throw TruncationError") {
    SimulationSettings settings;
    settings.k_taps = 64;
    const Reflector far{{1.6, 20.0}, 1.0, std::nullopt, 1.0};
    CHECK_THROWS_AS((void)synth_cir(side_site(), {far}, settings, NoiseSpec{}, 0), TruncationError);
}

TEST_CASE("streams are deterministic per seed") {
    const Scene scene{side_site(), {{{1.6, 3.0}, 2.5, std::nullopt, 1.0}}};
    SimulationSettings settings;
    const auto a = synth_stream(scene, settings, 300, NoiseSpec{20.0, 7});
    const auto b = synth_stream(scene, settings, 300, NoiseSpec{20.0, 7});
    REQUIRE(a.size() == 300);
    for (std::size_t e = 0; e < a.size(); ++e) {
        CHECK(a[e].epoch == e);
        REQUIRE(a[e].taps.size() == kDefaultTaps);
        bool same = true;
        for (std::size_t k = 0; k < a[e].taps.size(); ++k) {
            same = same && a[e].taps[k].i == b[e].taps[k].i && a[e].taps[k].q == b[e].taps[k].q;
        }
        CHECK(same);
    }

    // Another seed changes the noise, not where the energy sits.
    const auto c = synth_stream(scene, settings, 20, NoiseSpec{40.0, 8});
    const auto d = synth_stream(scene, settings, 20, NoiseSpec{40.0, 9});
    CHECK(c[0].taps[0].i != d[0].taps[0].i);
    for (std::size_t e = 0; e < c.size(); ++e) {
        const MagnitudeProfile mc = magnitude(c[e]);
        const MagnitudeProfile md = magnitude(d[e]);
        CHECK(argmax_after(mc.values, 0) == argmax_after(md.values, 0));
        CHECK(argmax_after(mc.values, 22) == argmax_after(md.values, 22));
    }

    CHECK_THROWS_AS((void)synth_stream(scene, settings, 0, NoiseSpec{}), RejectedInput);
}

TEST_CASE("noise power follows the requested SNR") {
    SimulationSettings settings;
    const double snr_db = 10.0;
    double power = 0.0;
    std::size_t n = 0;
    for (std::uint64_t e = 0; e < 20; ++e) {
        const Cir cir = synth_cir(side_site(), {}, settings, NoiseSpec{snr_db, 3}, e);
        for (std::size_t k = 200; k < cir.taps.size(); ++k) {
            power += cir.taps[k].i * cir.taps[k].i + cir.taps[k].q * cir.taps[k].q;
            ++n;
        }
    }
    const double peak = PulseShape{}.peak() / 3.2;
    const double measured_db = 10.0 * std::log10(peak * peak / (power / static_cast<double>(n)));
    CHECK(std::fabs(measured_db - snr_db) < 0.2);
}

TEST_CASE("reflection amplitude rises with reflectivity and falls with distance") {
    SimulationSettings settings;
    double prev = 0.0;
    for (double rho : {0.5, 1.0, 2.0, 4.0}) {
        const auto paths = path_components(side_site(), {{{1.6, 3.0}, rho, std::nullopt, 1.0}}, settings);
        CHECK(paths[1].amplitude > prev);
        prev = paths[1].amplitude;
    }
    prev = 1e300;
    for (double y : {2.0, 3.0, 5.0, 9.0}) {
        const auto paths = path_components(side_site(), {{{1.6, y}, 2.0, std::nullopt, 1.0}}, settings);
        CHECK(paths[1].amplitude < prev);
        prev = paths[1].amplitude;
    }
}

TEST_CASE("high-SNR reflection peaks land on the nearest tap") {
    SimulationSettings settings;
    for (double y : {2.5, 3.0, 4.0, 5.7}) {
        const Reflector r{{1.6, y}, 3.0, std::nullopt, 1.0};
        const auto paths = path_components(side_site(), {r}, settings);
        for (std::uint64_t e = 0; e < 5; ++e) {
            const MagnitudeProfile m = magnitude(synth_cir(side_site(), {r}, settings, NoiseSpec{30.0, 13}, e));
            const auto expected = static_cast<std::size_t>(std::lround(paths[1].delay_taps));
            const std::size_t found = argmax_after(m.values, expected - 3);
            CHECK(found + 1 >= expected);
            CHECK(found <= expected + 1);
        }
    }
}

TEST_CASE("reflections closer than the pulse width merge with the direct path") {
    SimulationSettings settings;
    const auto on_ellipse = [](double excess) {
        const double a = 1.6 + excess / 2.0;
        return Point2{1.6, std::sqrt(a * a - 1.6 * 1.6)};
    };
    for (std::uint64_t e = 0; e < 10; ++e) {
        // 0.2 m of excess path is under one tap: whatever the phases, one significant peak.
        const Reflector near{on_ellipse(0.2), 0.3, std::nullopt, 1.0};
        const MagnitudeProfile m = magnitude(synth_cir(side_site(), {near}, settings, NoiseSpec{}, e));
        const double top = *std::max_element(m.values.begin(), m.values.end());
        CHECK(count_local_maxima(m.values, 0.1 * top) == 1);

        // Four taps apart, the reflection is a peak of its own.
        const Reflector apart{on_ellipse(1.2), 6.0, std::nullopt, 1.0};
        const MagnitudeProfile m2 = magnitude(synth_cir(side_site(), {apart}, settings, NoiseSpec{}, e));
        const double top2 = *std::max_element(m2.values.begin(), m2.values.end());
        CHECK(count_local_maxima(m2.values, 0.1 * top2) == 2);
    }
}
