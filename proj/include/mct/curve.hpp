#pragma once

#include <span>
#include <vector>

namespace mct {

/// One 1D LUT of m knots. Knots may lie outside [0, c_max]; only the final
/// output of a translation is clamped.
class Curve1D
{
public:
    explicit Curve1D(std::vector<float> knots);

    int m() const noexcept { return static_cast<int>(knots_.size()); }
    std::span<const float> knots() const noexcept { return knots_; }

private:
    std::vector<float> knots_;
};

/// z = v * (m-1) / c_max with v clamped to [0, c_max] first; z lies in
/// [0, m-1]. Throws InvalidValueError for non-finite v.
double lookup_coord(float v, int m, float c_max);

/// Linear interpolation between knots floor(z) and ceil(z).
float eval_curve(const Curve1D& curve, float v, float c_max);

namespace detail {

// Splits z into the lower knot index and fraction, upper index clamped.
struct KnotPos
{
    int lo;
    int hi;
    double frac;
};

KnotPos knot_position(float v, int m, float c_max);

} // namespace detail

} // namespace mct
