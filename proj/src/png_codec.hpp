#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mct::detail {

struct PngPixels
{
    int height = 0;
    int width = 0;
    int channels = 0;   // 1 or 3
    int bit_depth = 8;  // 8 or 16
    std::vector<std::uint16_t> samples;
};

bool is_png(std::span<const std::uint8_t> bytes) noexcept;

// Palette and low bit depths are expanded, alpha dropped.
PngPixels decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(int height, int width, int channels,
                                     std::span<const std::uint8_t> samples);

} // namespace mct::detail
