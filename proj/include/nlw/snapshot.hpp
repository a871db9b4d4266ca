#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlw/grid.hpp"

namespace nlw {

/// Binary field snapshots: magic "NLW1", then little-endian
///   u32 dimension, u64 node count, f64 r_max, f64 time,
/// then node radii, u samples, ut samples as f64 arrays.
namespace snapshot {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_bytes(std::string& buf, const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
}

template <class T>
inline void put(std::string& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    put_bytes(buf, &v, sizeof(T));  // little-endian host assumed (checked below)
}

inline void check_endianness() {
    const std::uint32_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    if (b != 1) throw FormatError("snapshot: big-endian hosts are not supported");
}

}  // namespace detail

inline void save(const FieldState& f, const std::string& path) {
    detail::check_endianness();
    f.validate();
    std::string buf;
    buf.reserve(24 + 24 * f.size());
    buf.append("NLW1", 4);
    detail::put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid->dim().n()));
    detail::put<std::uint64_t>(buf, static_cast<std::uint64_t>(f.size()));
    detail::put<double>(buf, f.grid->r_max());
    detail::put<double>(buf, f.time);
    for (double r : f.grid->nodes()) detail::put<double>(buf, r);
    for (double u : f.u) detail::put<double>(buf, u);
    for (double v : f.ut) detail::put<double>(buf, v);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("snapshot: cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw FormatError("snapshot: write failed: " + path);
}

inline FieldState load(const std::string& path) {
    detail::check_endianness();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("snapshot: cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 4 || buf.compare(0, 4, "NLW1") != 0)
        throw FormatError("snapshot: bad magic (expected NLW1): " + path);
    std::size_t off = 4;
    auto need = [&](std::size_t n) {
        if (buf.size() < off + n)
            throw FormatError("snapshot: truncated payload in " + path + ": missing " +
                              std::to_string(off + n - buf.size()) + " bytes");
    };
    auto get_u32 = [&]() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, buf.data() + off, 4);
        off += 4;
        return v;
    };
    auto get_u64 = [&]() {
        need(8);
        std::uint64_t v;
        std::memcpy(&v, buf.data() + off, 8);
        off += 8;
        return v;
    };
    auto get_f64 = [&]() {
        need(8);
        double v;
        std::memcpy(&v, buf.data() + off, 8);
        off += 8;
        return v;
    };

    const std::uint32_t dim_n = get_u32();
    if (dim_n < 3 || dim_n > 5)
        throw FormatError("snapshot: dimension outside {3,4,5}: " + std::to_string(dim_n));
    const std::uint64_t m = get_u64();
    if (m < 16 || m > (1ull << 32))
        throw FormatError("snapshot: implausible node count: " + std::to_string(m));
    {
        // the header fixes the total payload size; report the full shortfall
        const std::size_t expected = 4 + 4 + 8 + 8 + 8 + 3 * 8 * static_cast<std::size_t>(m);
        if (buf.size() < expected)
            throw FormatError("snapshot: truncated payload in " + path + ": missing " +
                              std::to_string(expected - buf.size()) + " bytes");
    }
    const double r_max = get_f64();
    const double time = get_f64();

    std::vector<double> radii(m), u(m), ut(m);
    for (auto& x : radii) x = get_f64();
    for (auto& x : u) x = get_f64();
    for (auto& x : ut) x = get_f64();
    if (off != buf.size()) throw FormatError("snapshot: trailing bytes in " + path);

    if (radii.back() != r_max) throw FormatError("snapshot: node radii disagree with r_max");
    const Dimension dim(static_cast<int>(dim_n));
    FieldState f;
    f.grid = std::make_shared<const RadialGrid>(RadialGrid::from_nodes(std::move(radii), dim));
    f.u = std::move(u);
    f.ut = std::move(ut);
    f.time = time;
    f.validate();
    return f;
}

}  // namespace snapshot
}  // namespace nlw
