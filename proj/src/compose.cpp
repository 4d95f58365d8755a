#include "mct/compose.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mct/error.hpp"
#include "mct/random.hpp"

namespace mct {

CurveGrid compose_base(const CurveGrid& delta, const Image& base)
{
    if (delta.n_curves() != 9)
        throw ShapeError("compose_base needs a 9-curve grid");
    if (base.channels() != 3)
        throw ShapeError("compose_base needs an RGB base image");
    if (base.height() != delta.grid_h() || base.width() != delta.grid_w())
        throw ShapeError("base image " + std::to_string(base.height()) + "x" +
                         std::to_string(base.width()) + " does not match grid " +
                         std::to_string(delta.grid_h()) + "x" + std::to_string(delta.grid_w()));

    std::vector<float> knots(delta.knots().begin(), delta.knots().end());
    const int m = delta.m();
    for (int i = 0; i < delta.grid_h(); ++i)
        for (int j = 0; j < delta.grid_w(); ++j)
            for (int p = 0; p < 3; ++p)
            {
                const float bias = base.at(i, j, p);
                auto* curve = knots.data() + delta.offset(i, j, crossing_index(p, p));
                for (int k = 0; k < m; ++k)
                    curve[k] += bias;
            }
    return CurveGrid(delta.grid_h(), delta.grid_w(), 9, m, std::move(knots), delta.c_max());
}

std::pair<int, int> crop_offset(int pad, std::uint64_t seed)
{
    if (pad < 0)
        throw ConfigError("pad must be >= 0");
    if (pad == 0)
        return {0, 0};
    SplitMix64 rng(seed);
    const auto span = static_cast<std::uint64_t>(2 * pad + 1);
    const int dy = static_cast<int>(rng.below(span));
    const int dx = static_cast<int>(rng.below(span));
    return {dy, dx};
}

CurveGrid misalign_at(const CurveGrid& g, int pad, int dy, int dx)
{
    if (pad < 0)
        throw ConfigError("pad must be >= 0");
    if (dy < 0 || dy > 2 * pad || dx < 0 || dx > 2 * pad)
        throw ContractError("crop offset outside [0, 2 * pad]");

    const int gh = g.grid_h();
    const int gw = g.grid_w();
    std::vector<float> knots(g.knots().size());
    for (int i = 0; i < gh; ++i)
    {
        // padded row i + dy is source row i + dy - pad, replicated at the edges
        const int si = std::clamp(i + dy - pad, 0, gh - 1);
        for (int j = 0; j < gw; ++j)
        {
            const int sj = std::clamp(j + dx - pad, 0, gw - 1);
            const auto src = g.cell(si, sj);
            std::copy(src.begin(), src.end(), knots.begin() + g.offset(i, j, 0));
        }
    }
    return CurveGrid(gh, gw, g.n_curves(), g.m(), std::move(knots), g.c_max());
}

CurveGrid misalign(const CurveGrid& g, int pad, std::uint64_t seed)
{
    const auto [dy, dx] = crop_offset(pad, seed);
    return misalign_at(g, pad, dy, dx);
}

double spatial_gamma_at(const SynthSpec& spec, double col, int grid_w)
{
    if (grid_w <= 1)
        return spec.gamma0;
    return spec.gamma0 + (spec.gamma1 - spec.gamma0) * col / (grid_w - 1);
}

namespace {

float gamma_knot(int k, int m, double gamma, float c_max)
{
    return static_cast<float>(c_max * std::pow(static_cast<double>(k) / (m - 1), gamma));
}

void check_gamma(double gamma, const char* name)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ConfigError(std::string(name) + " must be positive and finite");
}

} // namespace

CurveGrid synth_grid(const SynthSpec& spec, int grid_h, int grid_w, int m, float c_max)
{
    if (m < 2)
        throw ConfigError("synthetic grids need m >= 2; a one-knot curve is constant");
    CurveGrid shape(grid_h, grid_w, 9, 1, c_max);  // validates dims
    switch (spec.kind)
    {
    case SynthKind::gamma:
        check_gamma(spec.gamma, "gamma");
        break;
    case SynthKind::spatial_gamma:
        check_gamma(spec.gamma0, "gamma0");
        check_gamma(spec.gamma1, "gamma1");
        break;
    default:
        break;
    }

    std::vector<float> knots(static_cast<std::size_t>(grid_h) * grid_w * 9 * m, 0.0f);
    auto at = [&](int i, int j, int c) {
        return knots.data() + ((static_cast<std::size_t>(i) * grid_w + j) * 9 + c) * m;
    };
    for (int i = 0; i < grid_h; ++i)
        for (int j = 0; j < grid_w; ++j)
        {
            if (spec.kind == SynthKind::sepia)
            {
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q)
                    {
                        float* t = at(i, j, crossing_index(p, q));
                        for (int k = 0; k < m; ++k)
                            t[k] = static_cast<float>(kSepia[q][p] * c_max *
                                                      (static_cast<double>(k) / (m - 1)));
                    }
                continue;
            }
            double gamma = 1.0;
            if (spec.kind == SynthKind::gamma)
                gamma = spec.gamma;
            else if (spec.kind == SynthKind::spatial_gamma)
                gamma = spatial_gamma_at(spec, j, grid_w);
            for (int p = 0; p < 3; ++p)
            {
                float* t = at(i, j, crossing_index(p, p));
                for (int k = 0; k < m; ++k)
                    t[k] = gamma_knot(k, m, gamma, c_max);
            }
        }
    return CurveGrid(grid_h, grid_w, 9, m, std::move(knots), c_max);
}

CurveGrid random_grid(int grid_h, int grid_w, int n_curves, int m, std::uint64_t seed, float lo,
                      float hi, float c_max)
{
    CurveGrid shape(grid_h, grid_w, n_curves, m, c_max);
    SplitMix64 rng(seed);
    std::vector<float> knots(shape.knots().size());
    for (auto& v : knots)
        v = static_cast<float>(rng.uniform(lo, hi));
    return CurveGrid(grid_h, grid_w, n_curves, m, std::move(knots), c_max);
}

} // namespace mct
