#pragma once

#include <cstdint>
#include <utility>

#include "mct/image.hpp"
#include "mct/lattice.hpp"

namespace mct {

/// Adds base[i][j][p] to every knot of the diagonal curve p -> p at cell
/// (i, j). Base must be RGB with the grid's spatial size; delta has 9 curves.
CurveGrid compose_base(const CurveGrid& delta, const Image& base);

/// Crop offset (dy, dx), each uniform in [0, 2 * pad], drawn from `seed`.
std::pair<int, int> crop_offset(int pad, std::uint64_t seed);

/// Edge-replicating pad by `pad` cells, then the grid-sized window at
/// (dy, dx) of the padded lattice.
CurveGrid misalign_at(const CurveGrid& g, int pad, int dy, int dx);

/// misalign_at with the offset from crop_offset(pad, seed).
CurveGrid misalign(const CurveGrid& g, int pad, std::uint64_t seed);

enum class SynthKind { identity, gamma, sepia, spatial_gamma };

struct SynthSpec
{
    SynthKind kind = SynthKind::identity;
    double gamma = 1.0;   // gamma
    double gamma0 = 1.0;  // spatial_gamma, left lattice column
    double gamma1 = 1.0;  // spatial_gamma, right lattice column
};

/// Classic sepia tone matrix, row = output channel, column = input.
inline constexpr double kSepia[3][3] = {
    {0.393, 0.769, 0.189},
    {0.349, 0.686, 0.168},
    {0.272, 0.534, 0.131},
};

/// Deterministic 9-curve fixture grids. m must be at least 2.
CurveGrid synth_grid(const SynthSpec& spec, int grid_h, int grid_w, int m, float c_max = 1.0f);

/// Gamma exponent assigned to lattice column `col` by spatial_gamma.
double spatial_gamma_at(const SynthSpec& spec, double col, int grid_w);

/// Knots uniform in [lo, hi), seeded.
CurveGrid random_grid(int grid_h, int grid_w, int n_curves, int m, std::uint64_t seed,
                      float lo = 0.0f, float hi = 1.0f, float c_max = 1.0f);

} // namespace mct
