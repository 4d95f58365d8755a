#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "mct/config.hpp"
#include "mct/image.hpp"

namespace mct {

/// Curve index for the channel-crossing curve mapping input channel `from`
/// to output channel `to` (0 = R, 1 = G, 2 = B) in a 9-curve grid. In a
/// 3-curve grid the index is the output channel alone.
constexpr int crossing_index(int from, int to) noexcept { return 3 * from + to; }

/// H_d x W_d lattice of curve sets, knots laid out [i][j][c][k] row-major.
class CurveGrid
{
public:
    /// Zero knots.
    CurveGrid(int grid_h, int grid_w, int n_curves, int m, float c_max = 1.0f);
    CurveGrid(int grid_h, int grid_w, int n_curves, int m, std::vector<float> knots,
              float c_max = 1.0f);

    int grid_h() const noexcept { return grid_h_; }
    int grid_w() const noexcept { return grid_w_; }
    int n_curves() const noexcept { return n_curves_; }
    int m() const noexcept { return m_; }
    float c_max() const noexcept { return c_max_; }

    std::span<const float> knots() const noexcept { return knots_; }

    std::size_t offset(int i, int j, int c, int k = 0) const noexcept
    {
        return ((static_cast<std::size_t>(i) * grid_w_ + j) * n_curves_ + c) * m_ + k;
    }

    // The m knots of curve c at cell (i, j).
    std::span<const float> curve(int i, int j, int c) const noexcept
    {
        return std::span<const float>(knots_).subspan(offset(i, j, c), m_);
    }

    // All n_curves * m knots of cell (i, j).
    std::span<const float> cell(int i, int j) const noexcept
    {
        return std::span<const float>(knots_).subspan(offset(i, j, 0),
                                                      static_cast<std::size_t>(n_curves_) * m_);
    }

    friend bool operator==(const CurveGrid&, const CurveGrid&) = default;

private:
    int grid_h_;
    int grid_w_;
    int n_curves_;
    int m_;
    float c_max_;
    std::vector<float> knots_;
};

/// Edge-aligned lattice position of pixel (i, j) in an h x w image:
/// (i * (grid_h-1)/(h-1), j * (grid_w-1)/(w-1)); a unit image axis maps to 0.
std::pair<double, double> lattice_coords(int i, int j, int h, int w, int grid_h, int grid_w);

/// Trilinear interpolation of curve c over (row, column, intensity) for the
/// value v at pixel (i, j) of an h x w image.
float slice_scalar(const CurveGrid& g, int c, int i, int j, float v, int h, int w);

/// Applies the grid to a full-resolution image. 9-curve grids take RGB
/// input and sum three crossing curves per output channel; 3-curve grids
/// take one channel and produce RGB. Rows are split across OpenMP workers
/// (count from worker_count()); the result does not depend on it.
Image translate(const CurveGrid& g, const Image& img, const TranslatorConfig& cfg = {});

/// Serial per-pixel evaluation through slice_scalar. Kept as the reference
/// that the parallel path is tested and benchmarked against.
Image translate_reference(const CurveGrid& g, const Image& img, const TranslatorConfig& cfg = {});

/// Raw H x W x 3 output of translate / translate_reference. With
/// cfg.clamp_output off the values are left as summed; the Image-returning
/// versions always saturate to [0, c_max].
std::vector<float> translate_values(const CurveGrid& g, const Image& img,
                                    const TranslatorConfig& cfg = {});
std::vector<float> translate_reference_values(const CurveGrid& g, const Image& img,
                                              const TranslatorConfig& cfg = {});

/// MCT_THREADS when set to a positive integer, else the OpenMP default.
int worker_count();

/// MCPM: "MCPM", u16 version = 1, u16 flags (bit 0: 3 curves), u32 grid_h,
/// u32 grid_w, u32 m, f32 c_max, then float32 knots. Little-endian.
inline constexpr std::size_t kMcpmHeaderSize = 24;

std::vector<std::uint8_t> save_grid(const CurveGrid& g);
CurveGrid load_grid(std::span<const std::uint8_t> bytes);

CurveGrid read_grid(const std::filesystem::path& path);
void write_grid(const CurveGrid& g, const std::filesystem::path& path);

} // namespace mct
