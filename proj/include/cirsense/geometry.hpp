#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cirsense/cir.hpp"
#include "cirsense/filtering.hpp"

namespace cirsense {

struct Point2 {
    double x{0.0};
    double y{0.0};

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

[[nodiscard]] double distance(Point2 a, Point2 b);

/// Axis-aligned rectangle in meters.
struct Rect {
    double x_min{0.0};
    double y_min{0.0};
    double x_max{0.0};
    double y_max{0.0};

    [[nodiscard]] bool contains(Point2 p) const noexcept {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    [[nodiscard]] double width() const noexcept { return x_max - x_min; }
    [[nodiscard]] double height() const noexcept { return y_max - y_min; }
};

/// True when the closed segment a-b touches the rectangle.
[[nodiscard]] bool segment_intersects(Point2 a, Point2 b, const Rect& rect);

inline constexpr double kDefaultLotWidth = 2.75;
inline constexpr double kDefaultLotLength = 5.0;

/// Bistatic anchor pair, parking lots and propagation speed of one site.
struct SiteGeometry {
    Point2 tx;
    Point2 rx;
    std::map<std::string, Rect> lots;
    double c{kSpeedOfLight};
    /// Blocking rectangles, only consulted by the simulator.
    std::vector<Rect> obstacles;
};

/// Throws ConfigError for coincident anchors, empty rectangles or a non-positive c.
void validate(const SiteGeometry& geom);

[[nodiscard]] double direct_path_length(const SiteGeometry& geom);

/// ||tx - p|| + ||rx - p||.
[[nodiscard]] double reflection_path_length(const SiteGeometry& geom, Point2 p);

/// d_p + (k - k_le) * delta_t * c. Ranges are anchored at the direct path because the
/// record start has an arbitrary acquisition offset.
[[nodiscard]] double bistatic_range_of_tap(std::size_t k, std::size_t k_le, double d_p, double delta_t,
                                           double c = kSpeedOfLight);

struct EllipseParams {
    double a{0.0};
    double b{0.0};
    Point2 center;
    double rotation{0.0};
    /// d_r == d_p: the ellipse collapses onto the baseline segment.
    bool degenerate{false};
};

/// Semi-axes of the ellipse with focal distance d_p and range sum d_r.
[[nodiscard]] EllipseParams ellipse_axes(double d_r, double d_p);
/// Same, with center and rotation taken from the anchors.
[[nodiscard]] EllipseParams ellipse_axes(const SiteGeometry& geom, double d_r);

/// `n_samples` world-frame points, uniform in the ellipse parameter, whose range sum is d_r.
[[nodiscard]] std::vector<Point2> ellipse_points(const SiteGeometry& geom, double d_r, std::size_t n_samples);

struct RangeInterval {
    double d_min{0.0};
    double d_max{0.0};

    [[nodiscard]] bool contains(double d) const noexcept { return d >= d_min && d <= d_max; }
};

[[nodiscard]] constexpr double tap_length(double delta_t = kDefaultDeltaT, double c = kSpeedOfLight) {
    return delta_t * c;
}

/// Range of bistatic path lengths a reflector inside the lot can produce, widened by
/// `widen_m` on both sides to absorb tap quantization.
[[nodiscard]] RangeInterval lot_range_interval(const SiteGeometry& geom, const std::string& lot_id,
                                               double widen_m = tap_length());

[[nodiscard]] std::map<std::string, RangeInterval> lot_intervals(const SiteGeometry& geom,
                                                                 double widen_m = tap_length());

inline constexpr double kDefaultCellSize = 0.1;
inline constexpr std::size_t kDefaultFillRadius = 3;

struct GridSpec {
    Point2 origin;
    double cell_size{kDefaultCellSize};
    std::size_t width{0};
    std::size_t height{0};
    /// Nearest-neighbor search radius in cells; 0 disables interpolation.
    std::size_t fill_radius{kDefaultFillRadius};
};

/// Grid covering the anchors and every lot plus `margin_m` on each side.
[[nodiscard]] GridSpec grid_for_site(const SiteGeometry& geom, double cell_size = kDefaultCellSize,
                                     double margin_m = 1.0, std::size_t fill_radius = kDefaultFillRadius);

/// Row-major raster; cell (ix, iy) spans [origin + ix * cell_size, origin + (ix + 1) * cell_size).
struct HeatGrid {
    Point2 origin;
    double cell_size{kDefaultCellSize};
    std::size_t width{0};
    std::size_t height{0};
    std::vector<double> cells;

    [[nodiscard]] double at(std::size_t ix, std::size_t iy) const { return cells[iy * width + ix]; }
    [[nodiscard]] double& at(std::size_t ix, std::size_t iy) { return cells[iy * width + ix]; }
    [[nodiscard]] Point2 cell_center(std::size_t ix, std::size_t iy) const {
        return {origin.x + (static_cast<double>(ix) + 0.5) * cell_size,
                origin.y + (static_cast<double>(iy) + 0.5) * cell_size};
    }
    /// Center of the hottest cell (first in row-major order on ties).
    [[nodiscard]] Point2 argmax() const;
};

/// Ring sample count that keeps consecutive samples within half a cell.
[[nodiscard]] std::size_t ring_samples(double a, double cell_size);

/// Maps every tap at or after the leading edge onto its ellipse, keeping the maximum
/// amplitude per cell, then fills empty cells from the nearest filled cell within
/// spec.fill_radius.
[[nodiscard]] HeatGrid build_heatmap(const SubtractedProfile& sub, const SiteGeometry& geom, const GridSpec& spec);

}  // namespace cirsense
