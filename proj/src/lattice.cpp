#include "mct/lattice.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "mct/curve.hpp"
#include "mct/error.hpp"
#include "slice_kernel.hpp"

namespace mct {

namespace {

void check_grid_shape(int grid_h, int grid_w, int n_curves, int m, float c_max)
{
    if (grid_h < 1 || grid_w < 1)
        throw ShapeError("grid dimensions must be at least 1x1");
    if (n_curves != 3 && n_curves != 9)
        throw ShapeError("n_curves must be 3 or 9, got " + std::to_string(n_curves));
    if (m < 1)
        throw ShapeError("knot count m must be at least 1");
    if (!(c_max > 0.0f) || !std::isfinite(c_max))
        throw ConfigError("grid c_max must be positive and finite");
}

std::size_t knot_count(int grid_h, int grid_w, int n_curves, int m)
{
    return static_cast<std::size_t>(grid_h) * grid_w * n_curves * m;
}

} // namespace

CurveGrid::CurveGrid(int grid_h, int grid_w, int n_curves, int m, float c_max)
    : grid_h_(grid_h), grid_w_(grid_w), n_curves_(n_curves), m_(m), c_max_(c_max)
{
    check_grid_shape(grid_h, grid_w, n_curves, m, c_max);
    knots_.assign(knot_count(grid_h, grid_w, n_curves, m), 0.0f);
}

CurveGrid::CurveGrid(int grid_h, int grid_w, int n_curves, int m, std::vector<float> knots,
                     float c_max)
    : grid_h_(grid_h), grid_w_(grid_w), n_curves_(n_curves), m_(m), c_max_(c_max),
      knots_(std::move(knots))
{
    check_grid_shape(grid_h, grid_w, n_curves, m, c_max);
    const auto expected = knot_count(grid_h, grid_w, n_curves, m);
    if (knots_.size() != expected)
        throw ShapeError("grid knot count " + std::to_string(knots_.size()) + ", expected " +
                         std::to_string(expected));
    for (std::size_t n = 0; n < knots_.size(); ++n)
        if (!std::isfinite(knots_[n]))
            throw InvalidValueError("grid knot " + std::to_string(n) + " is not finite");
}

std::pair<double, double> lattice_coords(int i, int j, int h, int w, int grid_h, int grid_w)
{
    // integer numerators keep exact lattice points exact
    const double rx = h == 1 ? 0.0 : static_cast<double>(std::int64_t{i} * (grid_h - 1)) / (h - 1);
    const double ry = w == 1 ? 0.0 : static_cast<double>(std::int64_t{j} * (grid_w - 1)) / (w - 1);
    return {rx, ry};
}

float slice_scalar(const CurveGrid& g, int c, int i, int j, float v, int h, int w)
{
    if (c < 0 || c >= g.n_curves())
        throw ContractError("curve index " + std::to_string(c) + " out of range");
    if (h < 1 || w < 1 || i < 0 || i >= h || j < 0 || j >= w)
        throw ContractError("pixel (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside " + std::to_string(h) + "x" + std::to_string(w));
    if (!std::isfinite(v))
        throw InvalidValueError("slice value is not finite");

    const auto [rx, ry] = lattice_coords(i, j, h, w, g.grid_h(), g.grid_w());
    const auto x = detail::axis_pos(rx, g.grid_h());
    const auto y = detail::axis_pos(ry, g.grid_w());
    const auto z = detail::intensity_pos(v, g.m(), g.c_max());
    const float* base = g.knots().data();
    return static_cast<float>(detail::trilinear(
        base + g.offset(x.lo, y.lo, c), base + g.offset(x.lo, y.hi, c),
        base + g.offset(x.hi, y.lo, c), base + g.offset(x.hi, y.hi, c), x, y, z));
}

namespace {

void check_translate_args(const CurveGrid& g, const Image& img, const TranslatorConfig& cfg)
{
    cfg.validate();
    if (g.n_curves() == 9 && img.channels() != 3)
        throw InvalidChannelError("9-curve grid needs an RGB image, got " +
                                  std::to_string(img.channels()) + " channel(s)");
    if (g.n_curves() == 3 && img.channels() != 1)
        throw InvalidChannelError("3-curve grid needs a single-channel image, got " +
                                  std::to_string(img.channels()) + " channels");
    if (g.c_max() != img.c_max() || cfg.c_max != img.c_max())
        throw ConfigError("c_max mismatch: grid " + std::to_string(g.c_max()) + ", image " +
                          std::to_string(img.c_max()) + ", config " + std::to_string(cfg.c_max));
}

float finish(double value, const TranslatorConfig& cfg)
{
    if (cfg.clamp_output)
        value = std::clamp(value, 0.0, static_cast<double>(cfg.c_max));
    return static_cast<float>(value);
}

// An Image cannot hold out-of-range values, so unclamped results saturate
// here; translate_values keeps them.
Image make_output(int h, int w, std::vector<float> out, const TranslatorConfig& cfg)
{
    if (!cfg.clamp_output)
        for (auto& v : out)
            v = std::clamp(v, 0.0f, cfg.c_max);
    return Image(h, w, 3, std::move(out), cfg.c_max);
}

} // namespace

int worker_count()
{
    if (const char* env = std::getenv("MCT_THREADS"))
    {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0)
            return static_cast<int>(std::min<long>(n, 4096));
    }
    return std::max(1, omp_get_max_threads());
}

std::vector<float> translate_values(const CurveGrid& g, const Image& img,
                                    const TranslatorConfig& cfg)
{
    check_translate_args(g, img, cfg);
    const int h = img.height();
    const int w = img.width();
    const int m = g.m();
    const int in_ch = img.channels();
    const int n_curves = g.n_curves();
    const double c_max = cfg.c_max;

    std::vector<detail::AxisPos> cols(w);
    for (int j = 0; j < w; ++j)
        cols[j] = detail::axis_pos(lattice_coords(0, j, h, w, g.grid_h(), g.grid_w()).second,
                                   g.grid_w());

    const float* knots = g.knots().data();
    const std::span<const float> src = img.data();
    std::vector<float> out(img.pixel_count() * 3);
    const std::size_t curve_stride = static_cast<std::size_t>(m);

    // Rows are independent, so static scheduling gives the same bits for any
    // worker count.
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int i = 0; i < h; ++i)
    {
        const auto x = detail::axis_pos(lattice_coords(i, 0, h, w, g.grid_h(), g.grid_w()).first,
                                        g.grid_h());
        const float* row_lo = knots + g.offset(x.lo, 0, 0);
        const float* row_hi = knots + g.offset(x.hi, 0, 0);
        const std::size_t cell_stride = static_cast<std::size_t>(n_curves) * m;
        for (int j = 0; j < w; ++j)
        {
            const auto& y = cols[j];
            const float* c00 = row_lo + y.lo * cell_stride;
            const float* c01 = row_lo + y.hi * cell_stride;
            const float* c10 = row_hi + y.lo * cell_stride;
            const float* c11 = row_hi + y.hi * cell_stride;
            const std::size_t px = static_cast<std::size_t>(i) * w + j;

            double acc[3] = {0.0, 0.0, 0.0};
            for (int p = 0; p < in_ch; ++p)
            {
                const auto z = detail::intensity_pos(src[px * in_ch + p], m, c_max);
                for (int q = 0; q < 3; ++q)
                {
                    const std::size_t c =
                        (n_curves == 9 ? crossing_index(p, q) : q) * curve_stride;
                    acc[q] += detail::trilinear(c00 + c, c01 + c, c10 + c, c11 + c, x, y, z);
                }
            }
            for (int q = 0; q < 3; ++q)
                out[px * 3 + q] = finish(acc[q], cfg);
        }
    }
    return out;
}

Image translate(const CurveGrid& g, const Image& img, const TranslatorConfig& cfg)
{
    return make_output(img.height(), img.width(), translate_values(g, img, cfg), cfg);
}

std::vector<float> translate_reference_values(const CurveGrid& g, const Image& img,
                                              const TranslatorConfig& cfg)
{
    check_translate_args(g, img, cfg);
    const int h = img.height();
    const int w = img.width();
    std::vector<float> out(img.pixel_count() * 3);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            for (int q = 0; q < 3; ++q)
            {
                double sum = 0.0;
                if (g.n_curves() == 9)
                {
                    for (int p = 0; p < 3; ++p)
                        sum += slice_scalar(g, crossing_index(p, q), i, j, img.at(i, j, p), h, w);
                }
                else
                {
                    sum = slice_scalar(g, q, i, j, img.at(i, j, 0), h, w);
                }
                out[(static_cast<std::size_t>(i) * w + j) * 3 + q] = finish(sum, cfg);
            }
    return out;
}

Image translate_reference(const CurveGrid& g, const Image& img, const TranslatorConfig& cfg)
{
    return make_output(img.height(), img.width(), translate_reference_values(g, img, cfg), cfg);
}

// ---- MCPM ----

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value)
{
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(raw), std::end(raw));
    out.insert(out.end(), std::begin(raw), std::end(raw));
}

template <typename T>
T get_le(const std::uint8_t* src)
{
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, src, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(raw), std::end(raw));
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
}

constexpr std::uint16_t kMcpmVersion = 1;
constexpr std::uint16_t kFlagThreeCurves = 0x1;

} // namespace

std::vector<std::uint8_t> save_grid(const CurveGrid& g)
{
    std::vector<std::uint8_t> out;
    out.reserve(kMcpmHeaderSize + g.knots().size() * 4);
    for (char ch : {'M', 'C', 'P', 'M'})
        out.push_back(static_cast<std::uint8_t>(ch));
    put_le<std::uint16_t>(out, kMcpmVersion);
    put_le<std::uint16_t>(out, g.n_curves() == 3 ? kFlagThreeCurves : 0);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.grid_h()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.grid_w()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.m()));
    put_le<float>(out, g.c_max());
    for (float v : g.knots())
        put_le<float>(out, v);
    return out;
}

CurveGrid load_grid(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kMcpmHeaderSize)
        throw FormatError("MCPM header: expected " + std::to_string(kMcpmHeaderSize) +
                          " bytes, got " + std::to_string(bytes.size()));
    const std::uint8_t* p = bytes.data();
    if (std::memcmp(p, "MCPM", 4) != 0)
        throw FormatError("MCPM magic: expected \"MCPM\"");
    const auto version = get_le<std::uint16_t>(p + 4);
    if (version != kMcpmVersion)
        throw FormatError("MCPM version: unsupported " + std::to_string(version));
    const auto flags = get_le<std::uint16_t>(p + 6);
    if ((flags & ~kFlagThreeCurves) != 0)
        throw FormatError("MCPM flags: unknown bits set");
    const auto grid_h = get_le<std::uint32_t>(p + 8);
    const auto grid_w = get_le<std::uint32_t>(p + 12);
    const auto m = get_le<std::uint32_t>(p + 16);
    const auto c_max = get_le<float>(p + 20);
    constexpr std::uint32_t kMaxDim = 1u << 24;
    if (grid_h == 0 || grid_h > kMaxDim)
        throw FormatError("MCPM grid_h: invalid value " + std::to_string(grid_h));
    if (grid_w == 0 || grid_w > kMaxDim)
        throw FormatError("MCPM grid_w: invalid value " + std::to_string(grid_w));
    if (m == 0 || m > kMaxDim)
        throw FormatError("MCPM m: invalid value " + std::to_string(m));
    if (!std::isfinite(c_max) || !(c_max > 0.0f))
        throw FormatError("MCPM c_max: must be positive and finite");

    const int n_curves = (flags & kFlagThreeCurves) ? 3 : 9;
    const unsigned __int128 count =
        static_cast<unsigned __int128>(grid_h) * grid_w * n_curves * m;
    const unsigned __int128 expected = count * 4;
    const std::size_t actual = bytes.size() - kMcpmHeaderSize;
    if (expected != actual)
        throw FormatError("MCPM payload length: expected " +
                          std::to_string(static_cast<unsigned long long>(expected)) +
                          " bytes, got " + std::to_string(actual));

    std::vector<float> knots(static_cast<std::size_t>(count));
    for (std::size_t n = 0; n < knots.size(); ++n)
    {
        knots[n] = get_le<float>(p + kMcpmHeaderSize + 4 * n);
        if (!std::isfinite(knots[n]))
            throw FormatError("MCPM knot[" + std::to_string(n) + "]: not finite");
    }
    return CurveGrid(static_cast<int>(grid_h), static_cast<int>(grid_w), n_curves,
                     static_cast<int>(m), std::move(knots), c_max);
}

CurveGrid read_grid(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
    return load_grid(bytes);
}

void write_grid(const CurveGrid& g, const std::filesystem::path& path)
{
    const auto bytes = save_grid(g);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("write failed: " + path.string());
}

} // namespace mct
