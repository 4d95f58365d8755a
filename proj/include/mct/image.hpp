#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mct {

/// Dense row-major H x W x C float raster with values in [0, c_max].
///
/// Immutable once constructed; operations return new images.
class Image
{
public:
    /// Zero-filled image.
    Image(int height, int width, int channels, float c_max = 1.0f);

    /// Takes ownership of `data` (layout [i][j][c]). Throws ShapeError on bad
    /// dimensions or length, InvalidValueError on values outside [0, c_max].
    Image(int height, int width, int channels, std::vector<float> data, float c_max = 1.0f);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    float c_max() const noexcept { return c_max_; }

    std::size_t pixel_count() const noexcept
    {
        return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
    }

    std::span<const float> data() const noexcept { return data_; }

    float at(int i, int j, int c) const noexcept
    {
        return data_[(static_cast<std::size_t>(i) * width_ + j) * channels_ + c];
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int height_;
    int width_;
    int channels_;
    float c_max_;
    std::vector<float> data_;
};

enum class ImageFormat { png, ppm };

/// PNG (8/16-bit, gray or RGB, alpha dropped) or binary PNM (P6, plus P5
/// grayscale). Values are scaled to [0, 1].
Image decode_image(std::span<const std::uint8_t> bytes);

/// 8-bit output, round(v / c_max * 255) with halves rounded up. One channel
/// images become grayscale PNG or P5; three channel images RGB PNG or P6.
std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format);

/// Format chosen from the extension (.png, .ppm/.pnm/.pgm).
Image read_image(const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path);
ImageFormat format_for_path(const std::filesystem::path& path);

/// Bilinear resampling with edge-aligned mapping src = dst * (S-1)/(D-1),
/// src = (S-1)/2 when D = 1. Works for upsampling as well.
Image downsample(const Image& img, int out_h, int out_w);

/// Rec. 601 luma. Requires a 3-channel image.
Image to_grayscale(const Image& img);

/// Per-channel mean shift c - mean(c) + mean(s), clamped to [0, c_max].
Image match_brightness(const Image& content, const Image& style);

} // namespace mct
