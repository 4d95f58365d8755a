#include "mct/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mct/error.hpp"

namespace mct {

Curve1D::Curve1D(std::vector<float> knots) : knots_(std::move(knots))
{
    if (knots_.empty())
        throw ShapeError("curve needs at least one knot");
    for (std::size_t k = 0; k < knots_.size(); ++k)
        if (!std::isfinite(knots_[k]))
            throw InvalidValueError("curve knot " + std::to_string(k) + " is not finite");
}

double lookup_coord(float v, int m, float c_max)
{
    if (!std::isfinite(v))
        throw InvalidValueError("lookup value is not finite");
    if (m < 1)
        throw ContractError("knot count must be at least 1");
    if (!(c_max > 0.0f))
        throw ConfigError("c_max must be positive");
    if (m == 1)
        return 0.0;
    const double clamped = std::clamp(static_cast<double>(v), 0.0, static_cast<double>(c_max));
    double z = clamped * (m - 1) / c_max;
    // A float v that represents the abscissa of knot k lands within float
    // rounding of k; snap it so the knot is returned exactly.
    const double nearest = std::nearbyint(z);
    if (std::abs(z - nearest) <= (m - 1) * 0x1.0p-22)
        z = nearest;
    return std::clamp(z, 0.0, static_cast<double>(m - 1));
}

namespace detail {

KnotPos knot_position(float v, int m, float c_max)
{
    const double z = lookup_coord(v, m, c_max);
    const int lo = std::min(static_cast<int>(z), m - 1);
    const int hi = std::min(lo + 1, m - 1);
    return {lo, hi, z - lo};
}

} // namespace detail

float eval_curve(const Curve1D& curve, float v, float c_max)
{
    const auto pos = detail::knot_position(v, curve.m(), c_max);
    const auto knots = curve.knots();
    return static_cast<float>((1.0 - pos.frac) * knots[pos.lo] + pos.frac * knots[pos.hi]);
}

} // namespace mct
