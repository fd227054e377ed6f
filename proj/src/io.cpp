#include "cirsense/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "cirsense/errors.hpp"

namespace cirsense {

namespace {

constexpr std::string_view kMagic = "# cirsense v1";

void append_number(std::string& out, double v, int precision) {
    char buf[64];
    const auto res = precision > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision)
                                   : std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void append_number(std::string& out, std::uint64_t v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

template <typename T>
bool parse_field(std::string_view text, T& value) {
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc{} && ptr == end && !text.empty();
}

std::string_view trim_cr(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

void write_cir_stream(std::ostream& out, const CirStream& stream, int precision) {
    std::string line;
    line.append(kMagic);
    line.append(" k=");
    append_number(line, static_cast<std::uint64_t>(stream.k_taps));
    line.append(" dt_ns=");
    append_number(line, stream.delta_t * 1e9, 0);
    line.push_back('\n');
    out << line;

    for (const Cir& cir : stream.records) {
        validate(cir, stream.k_taps);
        if (cir.delta_t != stream.delta_t) {
            throw RejectedInput("record delta_t differs from the stream delta_t");
        }
        line.clear();
        append_number(line, cir.epoch);
        line.push_back(',');
        append_number(line, static_cast<std::uint64_t>(cir.tx_id));
        line.push_back(',');
        append_number(line, static_cast<std::uint64_t>(cir.rx_id));
        for (const ComplexTap& tap : cir.taps) {
            line.push_back(',');
            append_number(line, tap.i, precision);
            line.push_back(',');
            append_number(line, tap.q, precision);
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) {
        throw Error("failed writing CIR stream");
    }
}

void write_cir_file(const CirStream& stream, const std::filesystem::path& path, int precision) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_cir_stream(out, stream, precision);
}

CirReader::CirReader(std::istream& in) : in_(in) {
    if (!std::getline(in_, buffer_)) {
        throw ParseError(1, "missing CIR file header");
    }
    line_ = 1;
    const std::string_view header = trim_cr(buffer_);
    if (header.substr(0, kMagic.size()) != kMagic) {
        throw ParseError(1, "header must start with '# cirsense v1'");
    }
    std::istringstream tokens{std::string(header.substr(kMagic.size()))};
    std::string token;
    bool has_k = false;
    bool has_dt = false;
    while (tokens >> token) {
        if (token.rfind("k=", 0) == 0) {
            has_k = parse_field(std::string_view(token).substr(2), k_taps_);
        } else if (token.rfind("dt_ns=", 0) == 0) {
            double dt_ns = 0.0;
            has_dt = parse_field(std::string_view(token).substr(6), dt_ns);
            delta_t_ = dt_ns * 1e-9;
        } else {
            throw ParseError(1, "unexpected header token '" + token + "'");
        }
    }
    if (!has_k || k_taps_ == 0) {
        throw ParseError(1, "header lacks a positive k=<K_taps>");
    }
    if (!has_dt || !(delta_t_ > 0.0) || !std::isfinite(delta_t_)) {
        throw ParseError(1, "header lacks a positive dt_ns=<delta_t>");
    }
}

std::optional<Cir> CirReader::next() {
    while (std::getline(in_, buffer_)) {
        ++line_;
        const std::string_view text = trim_cr(buffer_);
        if (text.empty()) {
            continue;
        }
        const std::size_t expected = 3 + 2 * k_taps_;
        std::size_t fields = 1;
        for (char ch : text) {
            fields += (ch == ',') ? 1 : 0;
        }
        if (fields != expected) {
            throw SchemaError(line_, "expected " + std::to_string(expected) + " fields, found " +
                                         std::to_string(fields));
        }

        Cir cir;
        cir.delta_t = delta_t_;
        cir.taps.resize(k_taps_);
        std::size_t index = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t comma = text.find(',', start);
            const std::string_view field =
                text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            bool ok = false;
            if (index == 0) {
                ok = parse_field(field, cir.epoch);
            } else if (index == 1) {
                ok = parse_field(field, cir.tx_id);
            } else if (index == 2) {
                ok = parse_field(field, cir.rx_id);
            } else {
                const std::size_t tap = (index - 3) / 2;
                double& slot = ((index - 3) % 2 == 0) ? cir.taps[tap].i : cir.taps[tap].q;
                ok = parse_field(field, slot) && std::isfinite(slot);
            }
            if (!ok) {
                throw ParseError(line_, "field " + std::to_string(index + 1) + " ('" + std::string(field) +
                                            "') is not a valid number");
            }
            ++index;
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        return cir;
    }
    return std::nullopt;
}

CirStream read_cir_stream(std::istream& in) {
    CirReader reader(in);
    CirStream stream;
    stream.k_taps = reader.k_taps();
    stream.delta_t = reader.delta_t();
    while (auto cir = reader.next()) {
        stream.records.push_back(std::move(*cir));
    }
    return stream;
}

CirStream read_cir_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return read_cir_stream(in);
}

void write_reports(std::ostream& out, std::span<const OccupancyReport> reports) {
    out << "epoch,mode,lot,d_r_est,amplitude\n";
    std::string line;
    for (const OccupancyReport& r : reports) {
        line.clear();
        append_number(line, r.epoch);
        line.push_back(',');
        line.append(to_string(r.mode));
        line.push_back(',');
        switch (r.verdict.kind) {
            case VerdictKind::lot:
                line.append(r.verdict.lot);
                break;
            case VerdictKind::ambiguous:
                line.append("ambiguous");
                break;
            case VerdictKind::none:
                line.append("none");
                break;
        }
        line.push_back(',');
        if (r.estimate) {
            append_number(line, r.estimate->d_r_est, 0);
            line.push_back(',');
            append_number(line, r.estimate->amplitude, 0);
        } else {
            line.push_back(',');
        }
        line.push_back('\n');
        out << line;
    }
}

std::vector<OccupancyReport> read_reports(std::istream& in) {
    std::vector<OccupancyReport> out;
    std::string raw;
    std::size_t line_no = 0;
    if (!std::getline(in, raw) || trim_cr(raw) != "epoch,mode,lot,d_r_est,amplitude") {
        throw ParseError(1, "missing report header 'epoch,mode,lot,d_r_est,amplitude'");
    }
    ++line_no;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view text = trim_cr(raw);
        if (text.empty()) {
            continue;
        }
        std::vector<std::string_view> cols;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = text.find(',', start);
            cols.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (cols.size() != 5) {
            throw SchemaError(line_no, "expected 5 report columns");
        }
        OccupancyReport r;
        if (!parse_field(cols[0], r.epoch)) {
            throw ParseError(line_no, "bad epoch");
        }
        try {
            r.mode = parse_mode(std::string(cols[1]));
        } catch (const RejectedInput& e) {
            throw ParseError(line_no, e.what());
        }
        if (cols[2] == "none") {
            r.verdict.kind = VerdictKind::none;
        } else if (cols[2] == "ambiguous") {
            r.verdict.kind = VerdictKind::ambiguous;
        } else if (!cols[2].empty()) {
            r.verdict.kind = VerdictKind::lot;
            r.verdict.lot = std::string(cols[2]);
            r.verdict.candidates = {r.verdict.lot};
        } else {
            throw ParseError(line_no, "empty lot column");
        }
        if (!cols[3].empty() || !cols[4].empty()) {
            ReflectionEstimate est;
            if (!parse_field(cols[3], est.d_r_est) || !parse_field(cols[4], est.amplitude)) {
                throw ParseError(line_no, "bad estimate columns");
            }
            r.estimate = est;
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_heatmap(std::ostream& out, const HeatGrid& grid) {
    std::string line;
    line.append("ncols ");
    append_number(line, static_cast<std::uint64_t>(grid.width));
    line.append("\nnrows ");
    append_number(line, static_cast<std::uint64_t>(grid.height));
    line.append("\nxllcorner ");
    append_number(line, grid.origin.x, 0);
    line.append("\nyllcorner ");
    append_number(line, grid.origin.y, 0);
    line.append("\ncellsize ");
    append_number(line, grid.cell_size, 0);
    line.append("\nNODATA_value -9999\n");
    out << line;
    for (std::size_t row = 0; row < grid.height; ++row) {
        const std::size_t iy = grid.height - 1 - row;
        line.clear();
        for (std::size_t ix = 0; ix < grid.width; ++ix) {
            if (ix != 0) {
                line.push_back(' ');
            }
            append_number(line, grid.at(ix, iy), 0);
        }
        line.push_back('\n');
        out << line;
    }
}

HeatGrid read_heatmap(std::istream& in) {
    HeatGrid grid;
    std::string key;
    std::string value;
    bool keys[5] = {};
    for (int i = 0; i < 6; ++i) {
        if (!(in >> key >> value)) {
            throw ParseError(static_cast<std::size_t>(i + 1), "truncated heatmap header");
        }
        const auto line = static_cast<std::size_t>(i + 1);
        bool ok = true;
        if (key == "ncols") {
            ok = parse_field(std::string_view(value), grid.width);
            keys[0] = true;
        } else if (key == "nrows") {
            ok = parse_field(std::string_view(value), grid.height);
            keys[1] = true;
        } else if (key == "xllcorner") {
            ok = parse_field(std::string_view(value), grid.origin.x);
            keys[2] = true;
        } else if (key == "yllcorner") {
            ok = parse_field(std::string_view(value), grid.origin.y);
            keys[3] = true;
        } else if (key == "cellsize") {
            ok = parse_field(std::string_view(value), grid.cell_size);
            keys[4] = true;
        } else if (key != "NODATA_value") {
            throw ParseError(line, "unknown heatmap header key '" + key + "'");
        }
        if (!ok) {
            throw ParseError(line, "bad value for " + key);
        }
    }
    for (bool k : keys) {
        if (!k) {
            throw ParseError(6, "incomplete heatmap header");
        }
    }
    grid.cells.assign(grid.width * grid.height, 0.0);
    for (std::size_t row = 0; row < grid.height; ++row) {
        for (std::size_t ix = 0; ix < grid.width; ++ix) {
            if (!(in >> value) || !parse_field(std::string_view(value), grid.at(ix, grid.height - 1 - row))) {
                throw ParseError(7 + row, "bad or missing heatmap value");
            }
        }
    }
    return grid;
}

}  // namespace cirsense
