#include "hcu/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hcu {

std::array<std::uint8_t, 3> palette_color(int item, int items, bool degenerate,
                                          double concentration, const Palette& pal) {
    if (degenerate) return {128, 128, 128};
    // family 0 = red, 1 = green, 2 = blue; shade darkens within a group
    int family, shade;
    if (items == 9) {
        family = item / 3;
        shade = item % 3;
    } else {
        family = item % 3;
        shade = 0;
    }
    static const double steps[3] = {1.0, 0.72, 0.46};
    double level = 255.0 * steps[shade];
    if (pal.modulate_brightness) {
        const double m = std::clamp(concentration / pal.s_ref, 0.15, 1.0);
        level *= m;
    }
    const auto v = static_cast<std::uint8_t>(std::lround(level));
    std::array<std::uint8_t, 3> rgb = {0, 0, 0};
    rgb[family] = v;
    return rgb;
}

void write_ppm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw ConfigError("write_ppm: raster size does not match dimensions");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("write_ppm: cannot open " + path);
    os << "P6\n" << width << " " << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(rgb.data()), rgb.size());
    if (!os) throw IoError("write_ppm: write failed: " + path);
}

void export_ppm_frames(const std::vector<DominanceFrame>& frames, int width, int height,
                       int items, const std::string& out_dir, const Palette& pal,
                       std::vector<std::string>* written) {
    std::filesystem::create_directories(out_dir);
    char name[32];
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        const DominanceFrame& f = frames[fi];
        if (f.item.size() != static_cast<std::size_t>(width) * height)
            throw ConfigError("export_ppm_frames: frame size does not match dimensions");
        std::vector<std::uint8_t> rgb;
        rgb.reserve(f.item.size() * 3);
        for (std::size_t k = 0; k < f.item.size(); ++k) {
            const auto c = palette_color(f.item[k], items, f.degenerate[k] != 0,
                                         f.concentration[k], pal);
            rgb.insert(rgb.end(), c.begin(), c.end());
        }
        std::snprintf(name, sizeof(name), "frame_%06zu.ppm", fi);
        const std::string path = out_dir + "/" + name;
        write_ppm(path, width, height, rgb);
        if (written) written->push_back(path);
    }
}

} // namespace hcu
