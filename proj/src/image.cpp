#include "mct/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "mct/error.hpp"
#include "png_codec.hpp"

namespace mct {

Image::Image(int height, int width, int channels, float c_max)
    : Image(height, width, channels,
            std::vector<float>(static_cast<std::size_t>(std::max(height, 0)) *
                               static_cast<std::size_t>(std::max(width, 0)) *
                               static_cast<std::size_t>(std::max(channels, 0))),
            c_max)
{
}

Image::Image(int height, int width, int channels, std::vector<float> data, float c_max)
    : height_(height), width_(width), channels_(channels), c_max_(c_max), data_(std::move(data))
{
    if (height < 1 || width < 1)
        throw ShapeError("image dimensions must be at least 1x1, got " + std::to_string(height) +
                         "x" + std::to_string(width));
    if (channels != 1 && channels != 3)
        throw InvalidChannelError("image must have 1 or 3 channels, got " +
                                  std::to_string(channels));
    if (!(c_max > 0.0f) || !std::isfinite(c_max))
        throw ConfigError("c_max must be positive and finite");
    const std::size_t expected = pixel_count() * static_cast<std::size_t>(channels);
    if (data_.size() != expected)
        throw ShapeError("image data length " + std::to_string(data_.size()) + ", expected " +
                         std::to_string(expected));
    for (std::size_t n = 0; n < data_.size(); ++n)
    {
        const float v = data_[n];
        if (!(v >= 0.0f && v <= c_max))
            throw InvalidValueError("image value " + std::to_string(v) + " at index " +
                                    std::to_string(n) + " outside [0, c_max]");
    }
}

namespace {

// ---- PNM ----

class PnmReader
{
public:
    explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const noexcept { return pos_; }

    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size())
        {
            const auto ch = bytes_[pos_];
            if (ch == '#')
            {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            }
            else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' ||
                     ch == '\f')
                ++pos_;
            else
                break;
        }
    }

    unsigned long read_uint(const char* field)
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            throw DecodeError(std::string("PNM truncated header: missing ") + field +
                              " at offset " + std::to_string(pos_));
        unsigned long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9')
        {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFul)
                throw DecodeError(std::string("PNM ") + field + " too large at offset " +
                                  std::to_string(pos_));
            ++pos_;
            ++digits;
        }
        if (digits == 0)
            throw DecodeError(std::string("PNM expected ") + field + " at offset " +
                              std::to_string(pos_));
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void expect_single_space()
    {
        if (pos_ >= bytes_.size())
            throw DecodeError("PNM truncated header: no raster after maxval at offset " +
                              std::to_string(pos_));
        const auto ch = bytes_[pos_];
        if (!(ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'))
            throw DecodeError("PNM expected whitespace after maxval at offset " +
                              std::to_string(pos_));
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

Image decode_pnm(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 2)
        throw DecodeError("PNM truncated header at offset 0");
    int channels = 0;
    if (bytes[1] == '6')
        channels = 3;
    else if (bytes[1] == '5')
        channels = 1;
    else
        throw UnsupportedFormatError(std::string("unsupported PNM variant P") +
                                     static_cast<char>(bytes[1]));

    PnmReader body(bytes.subspan(2));
    const unsigned long width = body.read_uint("width");
    const unsigned long height = body.read_uint("height");
    const unsigned long maxval = body.read_uint("maxval");
    body.expect_single_space();
    if (width == 0 || height == 0)
        throw DecodeError("PNM zero dimension");
    if (maxval == 0 || maxval > 65535)
        throw UnsupportedFormatError("PNM maxval " + std::to_string(maxval) +
                                     " outside [1, 65535]");

    const std::size_t header = 2 + body.pos();
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    const std::size_t need = count * sample_bytes;
    if (bytes.size() - header < need)
        throw DecodeError("PNM truncated raster: expected " + std::to_string(need) +
                          " bytes at offset " + std::to_string(header) + ", got " +
                          std::to_string(bytes.size() - header));

    std::vector<float> data(count);
    const auto* raster = bytes.data() + header;
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t n = 0; n < count; ++n)
    {
        unsigned sample = sample_bytes == 2 ? (unsigned(raster[2 * n]) << 8) | raster[2 * n + 1]
                                            : raster[n];
        if (sample > maxval)
            throw DecodeError("PNM sample exceeds maxval at offset " +
                              std::to_string(header + n * sample_bytes));
        data[n] = static_cast<float>(sample * scale);
    }
    return Image(static_cast<int>(height), static_cast<int>(width), channels, std::move(data));
}

std::vector<std::uint8_t> encode_pnm(const Image& img, std::span<const std::uint8_t> samples)
{
    const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") + "\n" +
                               std::to_string(img.width()) + " " + std::to_string(img.height()) +
                               "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), samples.begin(), samples.end());
    return out;
}

std::uint8_t quantize(float v, float c_max)
{
    // round half up
    const double scaled = std::floor(static_cast<double>(v) / c_max * 255.0 + 0.5);
    return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("write failed: " + path.string());
}

} // namespace

Image decode_image(std::span<const std::uint8_t> bytes)
{
    if (detail::is_png(bytes))
    {
        auto png = detail::decode_png(bytes);
        const double scale = 1.0 / (png.bit_depth == 16 ? 65535.0 : 255.0);
        std::vector<float> data(png.samples.size());
        for (std::size_t n = 0; n < data.size(); ++n)
            data[n] = static_cast<float>(png.samples[n] * scale);
        return Image(png.height, png.width, png.channels, std::move(data));
    }
    if (bytes.size() >= 2 && bytes[0] == 'P')
        return decode_pnm(bytes);
    throw UnsupportedFormatError("unrecognized image signature (expected PNG or P6/P5 PNM)");
}

std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format)
{
    const auto values = img.data();
    std::vector<std::uint8_t> samples(values.size());
    std::transform(values.begin(), values.end(), samples.begin(),
                   [c_max = img.c_max()](float v) { return quantize(v, c_max); });
    if (format == ImageFormat::ppm)
        return encode_pnm(img, samples);
    return detail::encode_png(img.height(), img.width(), img.channels(), samples);
}

ImageFormat format_for_path(const std::filesystem::path& path)
{
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png")
        return ImageFormat::png;
    if (ext == ".ppm" || ext == ".pnm" || ext == ".pgm")
        return ImageFormat::ppm;
    throw UnsupportedFormatError("unknown image extension '" + ext + "' (use .png or .ppm)");
}

Image read_image(const std::filesystem::path& path)
{
    const auto bytes = read_file(path);
    return decode_image(bytes);
}

void write_image(const Image& img, const std::filesystem::path& path)
{
    write_file(path, encode_image(img, format_for_path(path)));
}

Image downsample(const Image& img, int out_h, int out_w)
{
    if (out_h < 1 || out_w < 1)
        throw ShapeError("resample target must be at least 1x1");
    const int h = img.height();
    const int w = img.width();
    const int ch = img.channels();

    auto axis = [](int dst, int src_n, int dst_n) {
        if (dst_n == 1)
            return (src_n - 1) / 2.0;
        return static_cast<double>(dst) * (src_n - 1) / (dst_n - 1);
    };

    std::vector<float> out(static_cast<std::size_t>(out_h) * out_w * ch);
    for (int i = 0; i < out_h; ++i)
    {
        const double sy = axis(i, h, out_h);
        const int y0 = std::min(static_cast<int>(sy), h - 1);
        const int y1 = std::min(y0 + 1, h - 1);
        const double fy = sy - y0;
        for (int j = 0; j < out_w; ++j)
        {
            const double sx = axis(j, w, out_w);
            const int x0 = std::min(static_cast<int>(sx), w - 1);
            const int x1 = std::min(x0 + 1, w - 1);
            const double fx = sx - x0;
            for (int c = 0; c < ch; ++c)
            {
                // nested std::lerp stays within the four inputs
                const double top = std::lerp(double(img.at(y0, x0, c)), double(img.at(y0, x1, c)), fx);
                const double bot = std::lerp(double(img.at(y1, x0, c)), double(img.at(y1, x1, c)), fx);
                out[(static_cast<std::size_t>(i) * out_w + j) * ch + c] =
                    static_cast<float>(std::lerp(top, bot, fy));
            }
        }
    }
    return Image(out_h, out_w, ch, std::move(out), img.c_max());
}

Image to_grayscale(const Image& img)
{
    if (img.channels() != 3)
        throw InvalidChannelError("to_grayscale needs 3 channels, got " +
                                  std::to_string(img.channels()));
    const auto src = img.data();
    std::vector<float> out(img.pixel_count());
    for (std::size_t n = 0; n < out.size(); ++n)
    {
        const double gray =
            0.299 * src[3 * n] + 0.587 * src[3 * n + 1] + 0.114 * src[3 * n + 2];
        out[n] = static_cast<float>(std::clamp(gray, 0.0, static_cast<double>(img.c_max())));
    }
    return Image(img.height(), img.width(), 1, std::move(out), img.c_max());
}

namespace {

std::vector<double> channel_means(const Image& img)
{
    std::vector<double> sums(img.channels(), 0.0);
    const auto src = img.data();
    for (std::size_t n = 0; n < src.size(); ++n)
        sums[n % img.channels()] += src[n];
    for (auto& s : sums)
        s /= static_cast<double>(img.pixel_count());
    return sums;
}

} // namespace

Image match_brightness(const Image& content, const Image& style)
{
    if (content.channels() != style.channels())
        throw InvalidChannelError("match_brightness channel mismatch: " +
                                  std::to_string(content.channels()) + " vs " +
                                  std::to_string(style.channels()));
    if (content.c_max() != style.c_max())
        throw ConfigError("match_brightness c_max mismatch");
    const auto mc = channel_means(content);
    const auto ms = channel_means(style);
    const int ch = content.channels();
    const auto src = content.data();
    const double c_max = content.c_max();
    std::vector<float> out(src.size());
    for (std::size_t n = 0; n < src.size(); ++n)
    {
        const int c = static_cast<int>(n % ch);
        out[n] = static_cast<float>(std::clamp(src[n] - mc[c] + ms[c], 0.0, c_max));
    }
    return Image(content.height(), content.width(), ch, std::move(out), content.c_max());
}

} // namespace mct
