#include "cirsense/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "cirsense/errors.hpp"

namespace cirsense {

Scene ScenarioConfig::scene(bool occupied) const {
    Scene s;
    s.geometry = geometry;
    if (!simulation) {
        return s;
    }
    s.reflectors = simulation->static_reflectors;
    if (occupied) {
        s.reflectors.insert(s.reflectors.end(), simulation->target_reflectors.begin(),
                            simulation->target_reflectors.end());
        s.geometry.obstacles.insert(s.geometry.obstacles.end(), simulation->target_obstacles.begin(),
                                    simulation->target_obstacles.end());
    }
    return s;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

struct Cursor {
    std::size_t line{0};
    std::string section;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("scenario line " + std::to_string(line) + " [" + section + "]: " + what);
    }
};

double to_double(const Cursor& at, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        at.fail("'" + t + "' is not a number");
    }
    return v;
}

std::uint64_t to_unsigned(const Cursor& at, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        at.fail("'" + t + "' is not a non-negative integer");
    }
    return v;
}

std::vector<double> to_list(const Cursor& at, const std::string& text, std::size_t expected) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(to_double(at, item));
    }
    if (out.size() != expected) {
        at.fail("expected " + std::to_string(expected) + " comma-separated numbers");
    }
    return out;
}

Point2 to_point(const Cursor& at, const std::string& text) {
    const auto v = to_list(at, text, 2);
    return {v[0], v[1]};
}

Rect to_rect(const Cursor& at, const std::string& text) {
    const auto v = to_list(at, text, 4);
    return {v[0], v[1], v[2], v[3]};
}

bool to_role_is_target(const Cursor& at, const std::string& text) {
    if (text == "static") {
        return false;
    }
    if (text == "target") {
        return true;
    }
    at.fail("role must be 'static' or 'target'");
}

PulseKind to_pulse(const Cursor& at, const std::string& text) {
    if (text == "gaussian") {
        return PulseKind::gaussian;
    }
    if (text == "raised-cosine") {
        return PulseKind::raised_cosine;
    }
    at.fail("pulse must be 'gaussian' or 'raised-cosine'");
}

struct PendingReflector {
    Reflector reflector;
    bool target{true};
    bool has_position{false};
};

struct PendingObstacle {
    Rect rect;
    bool target{false};
    bool has_rect{false};
};

}  // namespace

ScenarioConfig parse_scenario(std::istream& in) {
    ScenarioConfig cfg;
    SimulationConfig sim;
    bool has_simulation = false;
    std::vector<PendingReflector> reflectors;
    std::vector<PendingObstacle> obstacles;
    std::string lot_id;
    bool has_tx = false;
    bool has_rx = false;

    Cursor at;
    std::string raw;
    while (std::getline(in, raw)) {
        ++at.line;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                at.fail("unterminated section header");
            }
            const std::string header = trim(std::string_view(line).substr(1, line.size() - 2));
            const auto space = header.find(' ');
            at.section = header.substr(0, space);
            const std::string arg = space == std::string::npos ? std::string{} : trim(header.substr(space + 1));
            if (at.section == "lot") {
                if (arg.empty()) {
                    at.fail("lot section needs an id, e.g. [lot P2]");
                }
                if (cfg.geometry.lots.count(arg) != 0) {
                    at.fail("duplicate lot id '" + arg + "'");
                }
                lot_id = arg;
                cfg.geometry.lots[lot_id] = Rect{};
            } else if (at.section == "reflector") {
                reflectors.emplace_back();
            } else if (at.section == "obstacle") {
                obstacles.emplace_back();
            } else if (at.section == "simulation") {
                has_simulation = true;
            } else if (at.section != "scenario" && at.section != "site" && at.section != "constants" &&
                       at.section != "evaluation") {
                at.fail("unknown section");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            at.fail("expected key = value");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const std::string& s = at.section;

        if (s.empty()) {
            at.fail("key outside any section");
        } else if (s == "scenario" && key == "name") {
            cfg.name = value;
        } else if (s == "site" && key == "tx") {
            cfg.geometry.tx = to_point(at, value);
            has_tx = true;
        } else if (s == "site" && key == "rx") {
            cfg.geometry.rx = to_point(at, value);
            has_rx = true;
        } else if (s == "site" && key == "c") {
            cfg.geometry.c = to_double(at, value);
        } else if (s == "lot" && key == "rect") {
            cfg.geometry.lots[lot_id] = to_rect(at, value);
        } else if (s == "obstacle" && key == "rect") {
            obstacles.back().rect = to_rect(at, value);
            obstacles.back().has_rect = true;
        } else if (s == "obstacle" && key == "role") {
            obstacles.back().target = to_role_is_target(at, value);
        } else if (s == "constants" && key == "k_taps") {
            cfg.constants.k_taps = to_unsigned(at, value);
        } else if (s == "constants" && key == "delta_t_ns") {
            cfg.constants.delta_t = to_double(at, value) * 1e-9;
        } else if (s == "constants" && key == "alpha") {
            cfg.constants.alpha = to_double(at, value);
        } else if (s == "constants" && key == "warmup_k") {
            cfg.constants.warmup_k = to_unsigned(at, value);
        } else if (s == "constants" && key == "leading_edge_fraction") {
            cfg.constants.leading_edge_fraction = to_double(at, value);
        } else if (s == "constants" && key == "guard_taps") {
            cfg.constants.guard_taps = to_unsigned(at, value);
        } else if (s == "constants" && key == "min_amplitude") {
            cfg.constants.min_amplitude = to_double(at, value);
        } else if (s == "constants" && key == "cell_size") {
            cfg.constants.cell_size = to_double(at, value);
        } else if (s == "constants" && key == "fill_radius") {
            cfg.constants.fill_radius = to_unsigned(at, value);
        } else if (s == "simulation" && key == "direct_offset_taps") {
            sim.settings.direct_offset_taps = to_unsigned(at, value);
        } else if (s == "simulation" && key == "pulse") {
            sim.settings.pulse = to_pulse(at, value);
        } else if (s == "simulation" && key == "bandwidth_mhz") {
            sim.settings.bandwidth = to_double(at, value) * 1e6;
        } else if (s == "simulation" && key == "snr_db") {
            sim.noise.snr_db = to_double(at, value);
        } else if (s == "simulation" && key == "seed") {
            sim.noise.seed = to_unsigned(at, value);
        } else if (s == "simulation" && key == "epochs") {
            sim.epochs = to_unsigned(at, value);
        } else if (s == "simulation" && key == "tx_id") {
            sim.settings.tx_id = static_cast<std::uint32_t>(to_unsigned(at, value));
        } else if (s == "simulation" && key == "rx_id") {
            sim.settings.rx_id = static_cast<std::uint32_t>(to_unsigned(at, value));
        } else if (s == "reflector" && key == "position") {
            reflectors.back().reflector.position = to_point(at, value);
            reflectors.back().has_position = true;
        } else if (s == "reflector" && key == "reflectivity") {
            reflectors.back().reflector.reflectivity = to_double(at, value);
        } else if (s == "reflector" && key == "role") {
            reflectors.back().target = to_role_is_target(at, value);
        } else if (s == "reflector" && key == "partner") {
            reflectors.back().reflector.double_bounce_partner = to_point(at, value);
        } else if (s == "reflector" && key == "partner_reflectivity") {
            reflectors.back().reflector.partner_reflectivity = to_double(at, value);
        } else if (s == "evaluation" && key == "truth_lot") {
            cfg.truth_lot = value;
        } else if (s == "evaluation" && key == "reference_d_r") {
            cfg.reference_d_r = to_double(at, value);
        } else {
            at.fail("unknown key '" + key + "'");
        }
    }

    if (!has_tx || !has_rx) {
        throw ConfigError("scenario needs [site] tx and rx");
    }
    for (const PendingObstacle& o : obstacles) {
        if (!o.has_rect) {
            throw ConfigError("obstacle section without rect");
        }
        if (o.target) {
            sim.target_obstacles.push_back(o.rect);
        } else {
            cfg.geometry.obstacles.push_back(o.rect);
        }
    }
    for (const PendingReflector& r : reflectors) {
        if (!r.has_position) {
            throw ConfigError("reflector section without position");
        }
        (r.target ? sim.target_reflectors : sim.static_reflectors).push_back(r.reflector);
    }
    if (has_simulation || !reflectors.empty() || !sim.target_obstacles.empty()) {
        sim.settings.k_taps = cfg.constants.k_taps;
        sim.settings.delta_t = cfg.constants.delta_t;
        cfg.simulation = sim;
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario " + path.string());
    }
    ScenarioConfig cfg = parse_scenario(in);
    if (cfg.name.empty()) {
        cfg.name = path.stem().string();
    }
    return cfg;
}

void validate(const ScenarioConfig& config) {
    validate(config.geometry);
    const PipelineConstants& k = config.constants;
    if (k.k_taps == 0) {
        throw ConfigError("k_taps must be positive");
    }
    if (!(k.delta_t > 0.0) || !std::isfinite(k.delta_t)) {
        throw ConfigError("delta_t must be positive");
    }
    if (!(k.alpha > 0.0 && k.alpha <= 1.0)) {
        throw ConfigError("alpha must lie in (0, 1]");
    }
    if (k.warmup_k == 0) {
        throw ConfigError("warmup_k must be at least 1");
    }
    if (!(k.leading_edge_fraction > 0.0 && k.leading_edge_fraction <= 1.0)) {
        throw ConfigError("leading_edge_fraction must lie in (0, 1]");
    }
    if (!(k.min_amplitude >= 0.0 && k.min_amplitude <= 2.0)) {
        throw ConfigError("min_amplitude must lie in [0, 2]");
    }
    if (!(k.cell_size > 0.0) || !std::isfinite(k.cell_size)) {
        throw ConfigError("cell_size must be positive");
    }
    if (config.truth_lot && !config.truth_lot->empty() && config.geometry.lots.count(*config.truth_lot) == 0) {
        throw ConfigError("truth_lot '" + *config.truth_lot + "' is not a lot of this site");
    }
    if (config.reference_d_r && !(*config.reference_d_r >= direct_path_length(config.geometry))) {
        throw ConfigError("reference_d_r is shorter than the direct path");
    }
    if (config.simulation) {
        const SimulationConfig& s = *config.simulation;
        if (s.settings.direct_offset_taps >= k.k_taps) {
            throw ConfigError("direct_offset_taps lies outside the record");
        }
        if (!(s.settings.bandwidth > 0.0)) {
            throw ConfigError("bandwidth_mhz must be positive");
        }
        if (s.epochs == 0) {
            throw ConfigError("epochs must be at least 1");
        }
        if (std::isnan(s.noise.snr_db)) {
            throw ConfigError("snr_db must be a number or inf");
        }
    }
}

}  // namespace cirsense
