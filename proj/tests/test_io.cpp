#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "cirsense/config.hpp"
#include "cirsense/errors.hpp"
#include "cirsense/io.hpp"
#include "cirsense/simulator.hpp"

using namespace cirsense;

namespace {

CirStream simulated_stream(std::size_t epochs, std::size_t k_taps = 96) {
    SiteGeometry g;
    g.tx = {0.0, 0.0};
    g.rx = {3.2, 0.0};
    SimulationSettings settings;
    settings.k_taps = k_taps;
    CirStream s;
    s.k_taps = k_taps;
    s.records = synth_stream({g, {{{1.6, 3.0}, 2.5, std::nullopt, 1.0}}}, settings, epochs, NoiseSpec{20.0, 5});
    return s;
}

std::string to_text(const CirStream& s, int precision = kCirPrecision) {
    std::ostringstream out;
    write_cir_stream(out, s, precision);
    return out.str();
}

CirStream from_text(const std::string& text) {
    std::istringstream in(text);
    return read_cir_stream(in);
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

template <typename E>
std::size_t error_line(const std::string& text) {
    try {
        (void)from_text(text);
    } catch (const E& e) {
        return e.line();
    }
    return 0;
}

const char* const kScenario = R"(
[scenario]
name = unit
[site]
tx = 0, 0
rx = 3.2, 0
[lot P2]
rect = -0.9, 1.5, 4.1, 4.25
[constants]
alpha = 0.5
[simulation]
snr_db = inf
seed = 3
[reflector]
position = 1.6, 3.0
reflectivity = 2.5
role = target
[evaluation]
truth_lot = P2
reference_d_r = 6.8
)";

}  // namespace

TEST_CASE("an empty stream writes only the header") {
    CirStream s;
    const std::string text = to_text(s);
    CHECK(line_count(text) == 1);
    CHECK(text.rfind("# cirsense v1 k=992 dt_ns=", 0) == 0);
    const CirStream back = from_text(text);
    CHECK(back.records.empty());
    CHECK(back.k_taps == 992);
    CHECK(back.delta_t == kDefaultDeltaT);
}

TEST_CASE("300 epochs write 301 lines") {
    const CirStream s = simulated_stream(300, kDefaultTaps);
    const std::string text = to_text(s);
    CHECK(line_count(text) == 301);
    // epoch, tx, rx and an i/q pair per tap.
    std::istringstream lines(text);
    std::string second;
    std::getline(lines, second);
    std::getline(lines, second);
    CHECK(std::count(second.begin(), second.end(), ',') == 2 + 2 * 992);
}

TEST_CASE("CIR files round-trip within the written precision") {
    const CirStream s = simulated_stream(40);
    const std::string text = to_text(s);
    const CirStream back = from_text(text);
    REQUIRE(back.records.size() == s.records.size());
    for (std::size_t e = 0; e < s.records.size(); ++e) {
        CHECK(back.records[e].epoch == s.records[e].epoch);
        CHECK(back.records[e].tx_id == s.records[e].tx_id);
        CHECK(back.records[e].rx_id == s.records[e].rx_id);
        for (std::size_t k = 0; k < s.k_taps; ++k) {
            const ComplexTap a = s.records[e].taps[k];
            const ComplexTap b = back.records[e].taps[k];
            CHECK(std::fabs(a.i - b.i) <= 1e-8 * std::max(1.0, std::fabs(a.i)));
            CHECK(std::fabs(a.q - b.q) <= 1e-8 * std::max(1.0, std::fabs(a.q)));
        }
    }
    // Writing what was read reproduces the file byte for byte.
    CHECK(to_text(back) == text);
}

TEST_CASE("17 significant digits round-trip exactly") {
    const CirStream s = simulated_stream(10);
    const CirStream back = from_text(to_text(s, 17));
    for (std::size_t e = 0; e < s.records.size(); ++e) {
        for (std::size_t k = 0; k < s.k_taps; ++k) {
            CHECK(back.records[e].taps[k].i == s.records[e].taps[k].i);
            CHECK(back.records[e].taps[k].q == s.records[e].taps[k].q);
        }
    }
    CHECK(from_text(to_text(s, 17)).delta_t == s.delta_t);
}

TEST_CASE("CirReader streams one record at a time") {
    const CirStream s = simulated_stream(5);
    std::istringstream in(to_text(s));
    CirReader reader(in);
    CHECK(reader.k_taps() == 96);
    std::size_t n = 0;
    while (auto rec = reader.next()) {
        CHECK(rec->epoch == n);
        ++n;
    }
    CHECK(n == 5);
}

TEST_CASE("malformed CIR files report the offending line") {
    const std::string header = "# cirsense v1 k=2 dt_ns=1\n";
    const std::string good = "0,0,1,1,0,0.5,0\n";
    CHECK(error_line<ParseError>(header + good + "1,0,1,1,x,0,0\n") == 3);
    CHECK(error_line<SchemaError>(header + good + good + "2,0,1,1,0\n") == 4);
    CHECK(error_line<SchemaError>(header + "0,0,1,1,0,0,0,9\n") == 2);
    CHECK(error_line<ParseError>("epoch,tx\n") == 1);
    CHECK(error_line<ParseError>("# cirsense v1 dt_ns=1\n") == 1);
    CHECK_THROWS_AS((void)from_text(""), ParseError);
    CHECK_THROWS_AS((void)from_text(header + "0,0,1,1,0,nan,0\n"), Error);
    CHECK_THROWS_AS((void)read_cir_file("/nonexistent/cirsense.csv"), Error);
}

TEST_CASE("reports round-trip through CSV") {
    std::vector<OccupancyReport> reports(4);
    reports[0].epoch = 4;
    reports[1].epoch = 5;
    reports[1].verdict = {VerdictKind::lot, "P2", {"P2"}};
    reports[1].estimate = ReflectionEstimate{7.1005, 0.75, 0};
    reports[2].epoch = 6;
    reports[2].mode = FilterMode::unfiltered;
    reports[2].verdict = {VerdictKind::ambiguous, "", {"P1", "P2"}};
    reports[2].estimate = ReflectionEstimate{6.9, 0.3, 0};
    reports[3].epoch = 7;
    reports[3].estimate = ReflectionEstimate{20.5, 0.21, 0};

    std::stringstream io;
    write_reports(io, reports);
    const auto back = read_reports(io);
    REQUIRE(back.size() == reports.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].epoch == reports[i].epoch);
        CHECK(back[i].mode == reports[i].mode);
        CHECK(back[i].verdict.kind == reports[i].verdict.kind);
        CHECK(back[i].lot() == reports[i].lot());
        REQUIRE(back[i].estimate.has_value() == reports[i].estimate.has_value());
        if (back[i].estimate) {
            CHECK(back[i].estimate->d_r_est == doctest::Approx(reports[i].estimate->d_r_est).epsilon(1e-9));
            CHECK(back[i].estimate->amplitude == doctest::Approx(reports[i].estimate->amplitude).epsilon(1e-9));
        }
    }

    std::istringstream bad("epoch,mode,lot,d_r_est,amplitude\n1,filtered,P2\n");
    CHECK_THROWS_AS((void)read_reports(bad), SchemaError);
}

TEST_CASE("heatmaps round-trip through ESRI ASCII grids") {
    HeatGrid g;
    g.origin = {-1.5, 2.25};
    g.cell_size = 0.5;
    g.width = 4;
    g.height = 3;
    g.cells.resize(12);
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        g.cells[i] = 0.125 * static_cast<double>(i);
    }
    std::stringstream io;
    write_heatmap(io, g);
    const std::string text = io.str();
    CHECK(text.rfind("ncols 4\nnrows 3\n", 0) == 0);
    const HeatGrid back = read_heatmap(io);
    CHECK(back.width == 4);
    CHECK(back.height == 3);
    CHECK(back.origin == g.origin);
    CHECK(back.cell_size == g.cell_size);
    CHECK(back.cells == g.cells);

    std::istringstream truncated("ncols 4\nnrows 3\n");
    CHECK_THROWS_AS((void)read_heatmap(truncated), ParseError);
}

TEST_CASE("scenario files parse into configuration") {
    std::istringstream in(kScenario);
    const ScenarioConfig cfg = parse_scenario(in);
    CHECK(cfg.name == "unit");
    CHECK(cfg.geometry.rx == Point2{3.2, 0.0});
    CHECK(cfg.geometry.lots.at("P2").y_max == 4.25);
    CHECK(cfg.constants.alpha == 0.5);
    CHECK(cfg.constants.warmup_k == kDefaultWarmup);
    REQUIRE(cfg.simulation.has_value());
    CHECK(std::isinf(cfg.simulation->noise.snr_db));
    CHECK(cfg.simulation->noise.seed == 3);
    CHECK(cfg.simulation->target_reflectors.size() == 1);
    CHECK(cfg.scene(false).reflectors.empty());
    CHECK(cfg.scene(true).reflectors.size() == 1);
    CHECK(cfg.truth_lot == "P2");
    CHECK(cfg.reference_d_r == 6.8);
}

TEST_CASE("scenario errors name the line") {
    const auto message = [](const std::string& text) -> std::string {
        std::istringstream in(text);
        try {
            (void)parse_scenario(in);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(message("[site]\ntx = 0, 0\nrx = 1\n").find("line 3") != std::string::npos);
    CHECK(message("[site]\ntx = 0, 0\nrx = 1, 0\nspeed = 3\n").find("unknown key") != std::string::npos);
    CHECK(message("[garage]\n").find("unknown section") != std::string::npos);
    CHECK_FALSE(message("[site]\ntx = 0, 0\n").empty());
    CHECK_FALSE(message("[site]\ntx = 0, 0\nrx = 1, 0\n[constants]\nalpha = 2\n").empty());
    CHECK_FALSE(message("[site]\ntx = 0, 0\nrx = 1, 0\n[evaluation]\ntruth_lot = P7\n").empty());
    CHECK_THROWS_AS((void)load_scenario("/nonexistent/scenario.ini"), ConfigError);
}

TEST_CASE("shipped scenarios load") {
    for (const char* name : {"side_p2.ini", "side_p3.ini", "wall_p2.ini"}) {
        const ScenarioConfig cfg = load_scenario(std::string(CIRSENSE_SCENARIO_DIR) + "/" + name);
        CHECK(cfg.simulation.has_value());
        CHECK(cfg.truth_lot.has_value());
        CHECK(cfg.geometry.lots.size() == 3);
    }
}
