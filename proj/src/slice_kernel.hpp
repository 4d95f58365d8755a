#pragma once

#include <algorithm>
#include <cmath>

#include "mct/lattice.hpp"

namespace mct::detail {

// Lower/upper lattice index along one axis and the fraction between them.
struct AxisPos
{
    int lo;
    int hi;
    double frac;
};

inline AxisPos axis_pos(double coord, int n) noexcept
{
    const int lo = std::min(static_cast<int>(coord), n - 1);
    return {lo, std::min(lo + 1, n - 1), coord - lo};
}

// Same arithmetic as lookup_coord, without argument checks. v must be finite.
inline AxisPos intensity_pos(float v, int m, double c_max) noexcept
{
    if (m == 1)
        return {0, 0, 0.0};
    double z = std::clamp(static_cast<double>(v), 0.0, c_max) * (m - 1) / c_max;
    const double nearest = std::nearbyint(z);
    if (std::abs(z - nearest) <= (m - 1) * 0x1.0p-22)
        z = nearest;
    z = std::clamp(z, 0.0, static_cast<double>(m - 1));
    return axis_pos(z, m);
}

// Trilinear sum over the eight corners (x.lo|x.hi, y.lo|y.hi, z.lo|z.hi).
// c00..c11 point at the same curve in the four surrounding cells.
inline double trilinear(const float* c00, const float* c01, const float* c10, const float* c11,
                        const AxisPos& x, const AxisPos& y, const AxisPos& z) noexcept
{
    const double wz0 = 1.0 - z.frac;
    const double wz1 = z.frac;
    const double v00 = wz0 * c00[z.lo] + wz1 * c00[z.hi];
    const double v01 = wz0 * c01[z.lo] + wz1 * c01[z.hi];
    const double v10 = wz0 * c10[z.lo] + wz1 * c10[z.hi];
    const double v11 = wz0 * c11[z.lo] + wz1 * c11[z.hi];
    const double top = (1.0 - y.frac) * v00 + y.frac * v01;
    const double bot = (1.0 - y.frac) * v10 + y.frac * v11;
    return (1.0 - x.frac) * top + x.frac * bot;
}

} // namespace mct::detail
