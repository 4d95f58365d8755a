#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mct::cost {

enum class LayerKind { conv, conv_transpose, resblock };

// Output resolution relative to the network input, num/den per axis.
struct Scale
{
    std::uint64_t num = 1;
    std::uint64_t den = 1;
};

struct LayerSpec
{
    LayerKind kind = LayerKind::conv;
    std::uint64_t in_ch = 1;
    std::uint64_t out_ch = 1;
    std::uint64_t kernel = 1;
    std::uint64_t stride = 1;
    Scale at_scale;
};

struct ArchSpec
{
    std::string name;
    std::vector<LayerSpec> layers;
    std::uint64_t head_out_ch = 3;  // output channels of the last layer
};

/// One layer per line: `<kind> <in> <out> <k> <stride> <num>/<den>`, kind in
/// {conv, conv_transpose, resblock}; `#` starts a comment.
ArchSpec parse_arch(std::string_view text, std::string name = "arch");
ArchSpec load_arch(const std::filesystem::path& path);

/// in * out * k^2 * out_h * out_w summed over layers, resblocks counting as
/// two convolutions. Evaluated as an exact rational, floored at the end.
std::uint64_t macs_fcn(const ArchSpec& arch, std::uint64_t h, std::uint64_t w);

/// One weight * knot accumulate per corner, 8 corners, 9 curves.
inline constexpr std::uint64_t kSlicingMacsPerPixel = 9 * 8;

struct MctCost
{
    std::uint64_t backbone = 0;    // unmodified network at grid resolution
    std::uint64_t head_delta = 0;  // widening the last layer to 9 * m outputs
    std::uint64_t slicing = 0;     // per-pixel curve slicing at full resolution

    std::uint64_t total() const noexcept { return backbone + head_delta + slicing; }
};

MctCost macs_mct(const ArchSpec& arch, std::uint64_t m, std::uint64_t grid_h,
                 std::uint64_t grid_w, std::uint64_t h, std::uint64_t w);

} // namespace mct::cost
