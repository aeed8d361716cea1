#include "hcu/snapshot.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace hcu {

namespace {

constexpr char kMagic[8] = {'H', 'K', 'S', 'N', 'A', 'P', '0', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 4 + 8 + 32; // 68

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& b, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(b, bits);
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

double get_f64(const std::uint8_t* p) {
    const std::uint64_t bits = get_u64(p);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::vector<std::uint8_t> encode_header(const SnapshotHeader& h) {
    std::vector<std::uint8_t> b;
    b.reserve(kHeaderBytes);
    put_u32(b, h.units);
    put_u32(b, h.items);
    put_u64(b, h.frames);
    put_f64(b, h.dt);
    put_u32(b, h.stride);
    put_u64(b, h.seed);
    for (char c : h.topology) b.push_back(static_cast<std::uint8_t>(c));
    return b;
}

} // namespace

std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t seed) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = seed ^ 0xffffffffu;
    const auto* p = static_cast<const std::uint8_t*>(data);
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ p[i]) & 0xffu] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
    const SnapshotHeader& h = snap.header;
    if (h.frames != snap.frames.size())
        throw ConfigError("snapshot: header frame count does not match payload");
    for (const auto& f : snap.frames)
        if (f.units != static_cast<int>(h.units) || f.items != static_cast<int>(h.items))
            throw ConfigError("snapshot: frame shape does not match header");

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("snapshot: cannot open for writing: " + path);
    os.write(kMagic, 8);
    const auto hb = encode_header(h);
    os.write(reinterpret_cast<const char*>(hb.data()), hb.size());
    std::vector<std::uint8_t> crc_bytes;
    put_u32(crc_bytes, crc32(hb.data(), hb.size()));
    os.write(reinterpret_cast<const char*>(crc_bytes.data()), 4);

    std::vector<std::uint8_t> payload;
    payload.reserve(static_cast<std::size_t>(h.units) * h.items * 8);
    for (const auto& f : snap.frames) {
        payload.clear();
        for (double v : f.values) put_f64(payload, v);
        os.write(reinterpret_cast<const char*>(payload.data()), payload.size());
    }
    if (!os) throw IoError("snapshot: write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("snapshot: cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw IoError("snapshot: bad magic in " + path);
    std::array<std::uint8_t, kHeaderBytes> hb;
    is.read(reinterpret_cast<char*>(hb.data()), hb.size());
    std::uint8_t crc_raw[4];
    is.read(reinterpret_cast<char*>(crc_raw), 4);
    if (!is) throw IoError("snapshot: truncated header in " + path);
    if (get_u32(crc_raw) != crc32(hb.data(), hb.size()))
        throw IoError("snapshot: header checksum mismatch in " + path);

    Snapshot snap;
    SnapshotHeader& h = snap.header;
    const std::uint8_t* p = hb.data();
    h.units = get_u32(p); p += 4;
    h.items = get_u32(p); p += 4;
    h.frames = get_u64(p); p += 8;
    h.dt = get_f64(p); p += 8;
    h.stride = get_u32(p); p += 4;
    h.seed = get_u64(p); p += 8;
    std::memcpy(h.topology, p, 32);
    if (h.units == 0 || h.items == 0 || h.items > 9)
        throw IoError("snapshot: implausible header in " + path);

    const std::size_t frame_doubles = static_cast<std::size_t>(h.units) * h.items;
    std::vector<std::uint8_t> buf(frame_doubles * 8);
    snap.frames.reserve(h.frames);
    for (std::uint64_t fi = 0; fi < h.frames; ++fi) {
        is.read(reinterpret_cast<char*>(buf.data()), buf.size());
        if (!is) throw IoError("snapshot: truncated payload in " + path);
        SystemState s(static_cast<int>(h.units), static_cast<int>(h.items));
        for (std::size_t i = 0; i < frame_doubles; ++i)
            s.values[i] = get_f64(buf.data() + i * 8);
        snap.frames.push_back(std::move(s));
    }
    return snap;
}

} // namespace hcu
