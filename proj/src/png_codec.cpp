#include "png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "mct/error.hpp"

// libpng reports errors by longjmp. Functions that call setjmp keep only
// trivially destructible locals; buffers live in the caller's objects.

namespace mct::detail {

namespace {

struct ReadSource
{
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
    char message[256];
};

struct WriteSink
{
    std::vector<std::uint8_t>* out;
    char message[256];
};

void on_error(png_structp png, png_const_charp msg)
{
    auto* buffer = static_cast<char*>(png_get_error_ptr(png));
    std::strncpy(buffer, msg, 255);
    buffer[255] = '\0';
    png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

void read_bytes(png_structp png, png_bytep dst, png_size_t n)
{
    auto* src = static_cast<ReadSource*>(png_get_io_ptr(png));
    if (src->size - src->pos < n)
        png_error(png, ("truncated stream at offset " + std::to_string(src->size)).c_str());
    std::memcpy(dst, src->data + src->pos, n);
    src->pos += n;
}

void write_bytes(png_structp png, png_bytep data, png_size_t n)
{
    auto* sink = static_cast<WriteSink*>(png_get_io_ptr(png));
    sink->out->insert(sink->out->end(), data, data + n);
}

void flush_noop(png_structp) {}

// Returns false and fills src.message on failure.
bool read_png(ReadSource& src, PngPixels& out, std::vector<png_bytep>& rows,
              std::vector<std::uint8_t>& raw)
{
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, src.message, on_error,
                                             on_warning);
    if (png == nullptr)
    {
        std::strcpy(src.message, "png_create_read_struct failed");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr)
    {
        png_destroy_read_struct(&png, nullptr, nullptr);
        std::strcpy(src.message, "png_create_info_struct failed");
        return false;
    }
    if (setjmp(png_jmpbuf(png)))
    {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }

    png_set_read_fn(png, &src, read_bytes);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (depth == 16)
        png_set_swap(png);  // host order, little-endian hosts only
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);

    const std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = raw.data() + stride * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool write_png(WriteSink& sink, int height, int width, int channels,
               std::vector<png_bytep>& rows)
{
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, sink.message, on_error,
                                              on_warning);
    if (png == nullptr)
    {
        std::strcpy(sink.message, "png_create_write_struct failed");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr)
    {
        png_destroy_write_struct(&png, nullptr);
        std::strcpy(sink.message, "png_create_info_struct failed");
        return false;
    }
    if (setjmp(png_jmpbuf(png)))
    {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &sink, write_bytes, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

} // namespace

bool is_png(std::span<const std::uint8_t> bytes) noexcept
{
    return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

PngPixels decode_png(std::span<const std::uint8_t> bytes)
{
    ReadSource src{bytes.data(), bytes.size(), 0, {}};
    PngPixels out;
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> raw;
    if (!read_png(src, out, rows, raw))
        throw DecodeError(std::string("PNG: ") + src.message);
    if (out.channels != 1 && out.channels != 3)
        throw UnsupportedFormatError("PNG with " + std::to_string(out.channels) + " channels");
    if (out.bit_depth != 8 && out.bit_depth != 16)
        throw UnsupportedFormatError("PNG bit depth " + std::to_string(out.bit_depth));

    const std::size_t count = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(count);
    if (out.bit_depth == 8)
    {
        for (std::size_t n = 0; n < count; ++n)
            out.samples[n] = raw[n];
    }
    else
    {
        std::memcpy(out.samples.data(), raw.data(), count * 2);
    }
    return out;
}

std::vector<std::uint8_t> encode_png(int height, int width, int channels,
                                     std::span<const std::uint8_t> samples)
{
    std::vector<std::uint8_t> out;
    WriteSink sink{&out, {}};
    std::vector<png_bytep> rows(height);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(samples.data() + stride * y);
    if (!write_png(sink, height, width, channels, rows))
        throw Error(std::string("PNG encode: ") + sink.message);
    return out;
}

} // namespace mct::detail
