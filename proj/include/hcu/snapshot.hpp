#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "hcu/state.hpp"

namespace hcu {

// Binary trajectory container. Layout: 8-byte magic "HKSNAP01", a
// fixed-width little-endian header followed by its CRC32, then the frame
// payload as 64-bit little-endian floats, frame-major, unit-major,
// item-major.
struct SnapshotHeader {
    std::uint32_t units = 0;
    std::uint32_t items = 0;
    std::uint64_t frames = 0;
    double dt = 0.0;
    std::uint32_t stride = 1;
    std::uint64_t seed = 0;
    char topology[32] = {}; // NUL-padded tag
};

struct Snapshot {
    SnapshotHeader header;
    std::vector<SystemState> frames;
};

std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t seed = 0);

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path); // throws IoError/ConfigError

} // namespace hcu
