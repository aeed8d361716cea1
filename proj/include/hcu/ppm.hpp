#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hcu/analysis.hpp"

namespace hcu {

// Dominant-item color convention: item groups 1-3, 4-6, 7-9 map to red,
// green, and blue families with a shade step inside each group; for
// three-item kinetics each item gets its own family. Degenerate dominance
// renders neutral gray.
struct Palette {
    bool modulate_brightness = true; // scale by dominant concentration / s_ref
    double s_ref = 1.0;              // concentration mapped to full brightness
};

std::array<std::uint8_t, 3> palette_color(int item, int items, bool degenerate,
                                          double concentration, const Palette& pal);

// One P6 file per frame, numbered frame_000000.ppm onward, raster laid out
// as a width x height grid (units row-major).
void export_ppm_frames(const std::vector<DominanceFrame>& frames, int width, int height,
                       int items, const std::string& out_dir, const Palette& pal,
                       std::vector<std::string>* written = nullptr);

void write_ppm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& rgb);

} // namespace hcu
