#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cirsense/cir.hpp"
#include "cirsense/detection.hpp"
#include "cirsense/geometry.hpp"

namespace cirsense {

/// Significant digits written for tap values.
inline constexpr int kCirPrecision = 9;

/// Records of one CIR file. Every record has k_taps taps spaced delta_t apart.
struct CirStream {
    std::size_t k_taps{kDefaultTaps};
    double delta_t{kDefaultDeltaT};
    std::vector<Cir> records;
};

/// Text format:
///   # cirsense v1 k=<K_taps> dt_ns=<delta_t in ns>
///   epoch,tx_id,rx_id,i_0,q_0,...,i_{K-1},q_{K-1}
void write_cir_stream(std::ostream& out, const CirStream& stream, int precision = kCirPrecision);
void write_cir_file(const CirStream& stream, const std::filesystem::path& path, int precision = kCirPrecision);

[[nodiscard]] CirStream read_cir_stream(std::istream& in);
[[nodiscard]] CirStream read_cir_file(const std::filesystem::path& path);

/// Line-at-a-time reader; holds one record in memory.
class CirReader {
public:
    explicit CirReader(std::istream& in);

    [[nodiscard]] std::size_t k_taps() const noexcept { return k_taps_; }
    [[nodiscard]] double delta_t() const noexcept { return delta_t_; }

    /// Next record, or nothing at end of input. Throws ParseError / SchemaError.
    [[nodiscard]] std::optional<Cir> next();

private:
    std::istream& in_;
    std::size_t line_{0};
    std::size_t k_taps_{0};
    double delta_t_{0.0};
    std::string buffer_;
};

/// CSV `epoch,mode,lot,d_r_est,amplitude`. lot is an id, `none` or `ambiguous`; the last two
/// columns are empty without an estimate.
void write_reports(std::ostream& out, std::span<const OccupancyReport> reports);
[[nodiscard]] std::vector<OccupancyReport> read_reports(std::istream& in);

/// ESRI ASCII grid: ncols/nrows/xllcorner/yllcorner/cellsize/NODATA_value header followed by
/// rows from the top (largest y) down.
void write_heatmap(std::ostream& out, const HeatGrid& grid);
[[nodiscard]] HeatGrid read_heatmap(std::istream& in);

}  // namespace cirsense
