// File formats.
//
// Snapshot ("ORDF1"): 5 magic bytes, then nx and ny as little-endian unsigned
// 32-bit integers, then the row-major field as little-endian IEEE-754
// doubles. Reading is the exact inverse; round trips are bitwise.
//
// Preview: binary 16-bit PGM (P5, maxval 65535, big-endian samples per the
// Netpbm convention), field values mapped affinely from [min, max] onto
// [0, 65535]; sentinel cells render as 0 and are excluded from the range.
#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ordf/core.hpp"
#include "ordf/grid.hpp"

namespace ordf {

inline constexpr char kSnapshotMagic[5] = {'O', 'R', 'D', 'F', '1'};

// Fixed 17-significant-digit decimal rendering; round-trips any double.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline void put_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f64_le(std::string& out, double d) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

inline double get_f64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

}  // namespace detail

inline std::string encode_snapshot(const Field& f) {
    std::string out;
    out.reserve(13 + static_cast<std::size_t>(f.size()) * 8);
    out.append(kSnapshotMagic, 5);
    detail::put_u32_le(out, static_cast<std::uint32_t>(f.nx()));
    detail::put_u32_le(out, static_cast<std::uint32_t>(f.ny()));
    for (double v : f.values()) detail::put_f64_le(out, v);
    return out;
}

inline void write_snapshot(const Field& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_snapshot: cannot open " + path);
    const std::string bytes = encode_snapshot(f);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw io_error("write_snapshot: write failed for " + path);
}

inline Field decode_snapshot(const std::string& bytes, double dx = 2.0, double dt = 0.2) {
    if (bytes.size() < 13 || bytes.compare(0, 5, kSnapshotMagic, 5) != 0)
        throw io_error("snapshot: bad magic");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t nx = detail::get_u32_le(p + 5);
    const std::uint32_t ny = detail::get_u32_le(p + 9);
    if (nx < 3 || ny < 3 || static_cast<std::uint64_t>(nx) * ny > 100000000ULL)
        throw io_error("snapshot: bad dimensions " + std::to_string(nx) + "x" + std::to_string(ny));
    const std::size_t want = 13 + static_cast<std::size_t>(nx) * ny * 8;
    if (bytes.size() != want)
        throw io_error("snapshot: truncated or oversized payload");
    GridSpec g{static_cast<int>(nx), static_cast<int>(ny), dx, dt};
    Field f(g);
    for (std::size_t c = 0; c < static_cast<std::size_t>(nx) * ny; ++c)
        f[static_cast<int>(c)] = detail::get_f64_le(p + 13 + c * 8);
    return f;
}

inline Field read_snapshot(const std::string& path, double dx = 2.0, double dt = 0.2) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_snapshot: cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes, dx, dt);
}

// 16-bit PGM preview. `sentinel`, when given, marks cells to render as black
// and exclude from the value range. A constant field renders mid-gray.
inline void write_preview(const Field& f, const std::string& path,
                          std::optional<double> sentinel = std::nullopt) {
    double mn = 0.0, mx = 0.0;
    bool any = false;
    for (double v : f.values()) {
        if (sentinel && v == *sentinel) continue;
        if (!any) {
            mn = mx = v;
            any = true;
        } else {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("write_preview: cannot open " + path);
    os << "P5\n" << f.nx() << " " << f.ny() << "\n65535\n";
    const double span = mx - mn;
    for (int j = 0; j < f.ny(); ++j) {
        for (int i = 0; i < f.nx(); ++i) {
            const double v = f(i, j);
            std::uint16_t pix;
            if (sentinel && v == *sentinel) {
                pix = 0;
            } else if (!(span > 0.0)) {
                pix = 32768;
            } else {
                const double s = (v - mn) / span;
                pix = static_cast<std::uint16_t>(std::lround(s * 65535.0));
            }
            os.put(static_cast<char>((pix >> 8) & 0xFF));  // big-endian sample
            os.put(static_cast<char>(pix & 0xFF));
        }
    }
    if (!os) throw io_error("write_preview: write failed for " + path);
}

}  // namespace ordf
