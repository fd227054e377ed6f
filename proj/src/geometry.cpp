#include "cirsense/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cirsense/errors.hpp"

namespace cirsense {

double distance(Point2 a, Point2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool segment_intersects(Point2 a, Point2 b, const Rect& rect) {
    // Liang-Barsky clipping of the parametric segment a + t (b - a), t in [0, 1].
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    double t0 = 0.0;
    double t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - rect.x_min, rect.x_max - a.x, a.y - rect.y_min, rect.y_max - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) {
                return false;
            }
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, r);
        } else {
            t1 = std::min(t1, r);
        }
        if (t0 > t1) {
            return false;
        }
    }
    return true;
}

namespace {

void validate_rect(const Rect& r, const std::string& what) {
    const bool finite = std::isfinite(r.x_min) && std::isfinite(r.x_max) && std::isfinite(r.y_min) &&
                        std::isfinite(r.y_max);
    if (!finite || !(r.x_max > r.x_min) || !(r.y_max > r.y_min)) {
        throw ConfigError(what + " must have positive area");
    }
}

}  // namespace

void validate(const SiteGeometry& geom) {
    if (!std::isfinite(geom.tx.x) || !std::isfinite(geom.tx.y) || !std::isfinite(geom.rx.x) ||
        !std::isfinite(geom.rx.y)) {
        throw ConfigError("anchor coordinates must be finite");
    }
    if (geom.tx == geom.rx) {
        throw ConfigError("transmitter and receiver must not coincide");
    }
    if (!(geom.c > 0.0) || !std::isfinite(geom.c)) {
        throw ConfigError("propagation speed must be positive");
    }
    for (const auto& [id, rect] : geom.lots) {
        validate_rect(rect, "lot " + id);
    }
    for (const Rect& rect : geom.obstacles) {
        validate_rect(rect, "obstacle");
    }
}

double direct_path_length(const SiteGeometry& geom) {
    return distance(geom.tx, geom.rx);
}

double reflection_path_length(const SiteGeometry& geom, Point2 p) {
    return distance(geom.tx, p) + distance(geom.rx, p);
}

double bistatic_range_of_tap(std::size_t k, std::size_t k_le, double d_p, double delta_t, double c) {
    if (k < k_le) {
        throw PreDirectPath("tap " + std::to_string(k) + " precedes the leading edge " + std::to_string(k_le));
    }
    return d_p + static_cast<double>(k - k_le) * delta_t * c;
}

EllipseParams ellipse_axes(double d_r, double d_p) {
    if (!(d_p > 0.0)) {
        throw InfeasibleRange("direct path length must be positive");
    }
    if (d_r < d_p) {
        throw InfeasibleRange("bistatic range " + std::to_string(d_r) + " m is shorter than the direct path " +
                              std::to_string(d_p) + " m");
    }
    EllipseParams e;
    e.a = d_r / 2.0;
    const double focal = d_p / 2.0;
    e.b = std::sqrt(std::max(0.0, e.a * e.a - focal * focal));
    e.degenerate = (d_r == d_p);
    return e;
}

EllipseParams ellipse_axes(const SiteGeometry& geom, double d_r) {
    EllipseParams e = ellipse_axes(d_r, direct_path_length(geom));
    e.center = 0.5 * (geom.tx + geom.rx);
    e.rotation = std::atan2(geom.rx.y - geom.tx.y, geom.rx.x - geom.tx.x);
    return e;
}

std::vector<Point2> ellipse_points(const SiteGeometry& geom, double d_r, std::size_t n_samples) {
    if (n_samples < 8) {
        throw RejectedInput("ellipse needs at least 8 samples");
    }
    const EllipseParams e = ellipse_axes(geom, d_r);
    const double cr = std::cos(e.rotation);
    const double sr = std::sin(e.rotation);
    std::vector<Point2> out;
    out.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_samples);
        const double u = e.a * std::cos(t);
        const double v = e.b * std::sin(t);
        out.push_back({e.center.x + u * cr - v * sr, e.center.y + u * sr + v * cr});
    }
    return out;
}

namespace {

/// Minimum of the convex range-sum function along segment a-b (golden-section search).
double min_along_edge(const SiteGeometry& geom, Point2 a, Point2 b) {
    const auto f = [&](double t) { return reflection_path_length(geom, a + t * (b - a)); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 1.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({f(0.0), f(1.0), f1, f2});
}

}  // namespace

RangeInterval lot_range_interval(const SiteGeometry& geom, const std::string& lot_id, double widen_m) {
    const auto it = geom.lots.find(lot_id);
    if (it == geom.lots.end()) {
        throw UnknownLot("unknown lot '" + lot_id + "'");
    }
    const Rect& r = it->second;
    const Point2 corners[4] = {{r.x_min, r.y_min}, {r.x_max, r.y_min}, {r.x_max, r.y_max}, {r.x_min, r.y_max}};

    // The range sum is convex in the reflector position: the maximum sits on a corner and the
    // minimum is d_p when the baseline crosses the lot, otherwise on the boundary.
    double d_max = 0.0;
    for (const Point2& p : corners) {
        d_max = std::max(d_max, reflection_path_length(geom, p));
    }
    double d_min = std::numeric_limits<double>::infinity();
    if (segment_intersects(geom.tx, geom.rx, r)) {
        d_min = direct_path_length(geom);
    } else {
        for (int i = 0; i < 4; ++i) {
            d_min = std::min(d_min, min_along_edge(geom, corners[i], corners[(i + 1) % 4]));
        }
    }
    return {d_min - widen_m, d_max + widen_m};
}

std::map<std::string, RangeInterval> lot_intervals(const SiteGeometry& geom, double widen_m) {
    std::map<std::string, RangeInterval> out;
    for (const auto& [id, rect] : geom.lots) {
        out.emplace(id, lot_range_interval(geom, id, widen_m));
    }
    return out;
}

GridSpec grid_for_site(const SiteGeometry& geom, double cell_size, double margin_m, std::size_t fill_radius) {
    if (!(cell_size > 0.0)) {
        throw RejectedInput("cell size must be positive");
    }
    double x_min = std::min(geom.tx.x, geom.rx.x);
    double x_max = std::max(geom.tx.x, geom.rx.x);
    double y_min = std::min(geom.tx.y, geom.rx.y);
    double y_max = std::max(geom.tx.y, geom.rx.y);
    for (const auto& [id, r] : geom.lots) {
        x_min = std::min(x_min, r.x_min);
        x_max = std::max(x_max, r.x_max);
        y_min = std::min(y_min, r.y_min);
        y_max = std::max(y_max, r.y_max);
    }
    GridSpec spec;
    spec.origin = {x_min - margin_m, y_min - margin_m};
    spec.cell_size = cell_size;
    spec.width = static_cast<std::size_t>(std::ceil((x_max - x_min + 2.0 * margin_m) / cell_size));
    spec.height = static_cast<std::size_t>(std::ceil((y_max - y_min + 2.0 * margin_m) / cell_size));
    spec.fill_radius = fill_radius;
    return spec;
}

Point2 HeatGrid::argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i] > cells[best]) {
            best = i;
        }
    }
    return cell_center(best % width, best / width);
}

std::size_t ring_samples(double a, double cell_size) {
    const auto n = static_cast<std::size_t>(std::ceil(4.0 * std::numbers::pi * a / cell_size));
    return std::max<std::size_t>(360, n);
}

HeatGrid build_heatmap(const SubtractedProfile& sub, const SiteGeometry& geom, const GridSpec& spec) {
    validate(geom);
    if (!(spec.cell_size > 0.0) || spec.width == 0 || spec.height == 0) {
        throw CoverageError("heatmap grid is empty");
    }
    const Rect extent{spec.origin.x, spec.origin.y,
                      spec.origin.x + static_cast<double>(spec.width) * spec.cell_size,
                      spec.origin.y + static_cast<double>(spec.height) * spec.cell_size};
    for (const auto& [id, r] : geom.lots) {
        if (r.x_min < extent.x_min || r.y_min < extent.y_min || r.x_max > extent.x_max || r.y_max > extent.y_max) {
            throw CoverageError("heatmap grid does not cover lot " + id);
        }
    }
    if (sub.leading_edge >= sub.size() && sub.size() != 0) {
        throw RejectedInput("subtracted profile leading edge outside the record");
    }

    HeatGrid grid;
    grid.origin = spec.origin;
    grid.cell_size = spec.cell_size;
    grid.width = spec.width;
    grid.height = spec.height;
    grid.cells.assign(spec.width * spec.height, 0.0);
    std::vector<bool> hit(grid.cells.size(), false);

    // Rings longer than the farthest grid corner cannot touch the grid.
    double reach = 0.0;
    for (const Point2 p : {Point2{extent.x_min, extent.y_min}, Point2{extent.x_max, extent.y_min},
                           Point2{extent.x_max, extent.y_max}, Point2{extent.x_min, extent.y_max}}) {
        reach = std::max(reach, reflection_path_length(geom, p));
    }

    const double d_p = direct_path_length(geom);
    for (std::size_t k = sub.leading_edge; k < sub.size(); ++k) {
        const double amplitude = sub.values[k];
        if (!(amplitude > 0.0)) {
            continue;
        }
        const double d_r = bistatic_range_of_tap(k, sub.leading_edge, d_p, sub.delta_t, geom.c);
        if (d_r > reach) {
            break;
        }
        for (const Point2& p : ellipse_points(geom, d_r, ring_samples(d_r / 2.0, spec.cell_size))) {
            const double fx = std::floor((p.x - spec.origin.x) / spec.cell_size);
            const double fy = std::floor((p.y - spec.origin.y) / spec.cell_size);
            if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(spec.width) ||
                fy >= static_cast<double>(spec.height)) {
                continue;
            }
            const std::size_t idx = static_cast<std::size_t>(fy) * spec.width + static_cast<std::size_t>(fx);
            grid.cells[idx] = std::max(grid.cells[idx], amplitude);
            hit[idx] = true;
        }
    }

    if (spec.fill_radius == 0) {
        return grid;
    }
    const std::vector<double> rasterized = grid.cells;
    const auto radius = static_cast<std::ptrdiff_t>(spec.fill_radius);
    const auto w = static_cast<std::ptrdiff_t>(spec.width);
    const auto h = static_cast<std::ptrdiff_t>(spec.height);
    for (std::ptrdiff_t iy = 0; iy < h; ++iy) {
        for (std::ptrdiff_t ix = 0; ix < w; ++ix) {
            if (hit[static_cast<std::size_t>(iy * w + ix)]) {
                continue;
            }
            std::ptrdiff_t best_d2 = radius * radius + 1;
            double best_value = 0.0;
            for (std::ptrdiff_t dy = -radius; dy <= radius; ++dy) {
                for (std::ptrdiff_t dx = -radius; dx <= radius; ++dx) {
                    const std::ptrdiff_t nx = ix + dx;
                    const std::ptrdiff_t ny = iy + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
                        continue;
                    }
                    const auto nidx = static_cast<std::size_t>(ny * w + nx);
                    const std::ptrdiff_t d2 = dx * dx + dy * dy;
                    if (hit[nidx] && d2 < best_d2) {
                        best_d2 = d2;
                        best_value = rasterized[nidx];
                    }
                }
            }
            grid.cells[static_cast<std::size_t>(iy * w + ix)] = best_value;
        }
    }
    return grid;
}

}  // namespace cirsense
