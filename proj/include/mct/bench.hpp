#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mct/image.hpp"
#include "mct/lattice.hpp"

namespace mct {

struct ImageSize
{
    int height = 0;
    int width = 0;
};

struct BenchEntry
{
    std::string label;
    int height = 0;
    int width = 0;
    int repeats = 0;
    double median_seconds = 0.0;
    double mpix_per_s = 0.0;
    std::string error;  // non-empty when the entry could not run
};

struct BenchReport
{
    std::vector<BenchEntry> entries;

    // label,height,width,repeats,median_seconds,mpix_per_s
    std::string to_csv() const;
};

enum class TranslatePath { parallel, reference };

/// Pseudorandom image, identical for identical arguments.
Image random_image(int height, int width, int channels, std::uint64_t seed, float c_max = 1.0f);

/// Times translate per size: `warmup` untimed runs then `repeats` timed
/// runs (>= 3); reports the median.
BenchReport bench_translate(const CurveGrid& g, std::span<const ImageSize> sizes, int repeats,
                            int warmup, std::uint64_t seed = 1,
                            TranslatePath path = TranslatePath::parallel);

/// Times the work that stands in for the backbone: downsample the input to
/// the lattice size, build a spatial_gamma grid, compose it with the
/// downsampled base. Its cost depends on the lattice size only.
BenchReport bench_grid_build(int grid_h, int grid_w, int m, std::span<const ImageSize> sizes,
                             int repeats, int warmup, std::uint64_t seed = 1);

/// "HxW,HxW,..." -> sizes. Throws ConfigError on malformed input.
std::vector<ImageSize> parse_sizes(const std::string& text);

} // namespace mct
