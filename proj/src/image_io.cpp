#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sightglow/image.hpp"

namespace sightglow {

RasterImage::RasterImage(std::size_t width, std::size_t height, int bit_depth, ColorRgba fill)
    : width_(width), height_(height), bit_depth_(8) {
    if (width == 0 || height == 0) {
        throw ValidationError("image dimensions must be positive");
    }
    set_bit_depth(bit_depth);
    pixels_.assign(width * height, fill);
}

void RasterImage::set_bit_depth(int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw ValidationError("bit depth must be 8 or 16");
    }
    bit_depth_ = bit_depth;
}

double max_code(int bit_depth) { return bit_depth == 16 ? 65535.0 : 255.0; }

std::uint32_t quantize_channel(double v, int bit_depth) {
    const double scaled = std::clamp(v, 0.0, 1.0) * max_code(bit_depth);
    // nearbyint honours the default round-to-nearest-even mode.
    return static_cast<std::uint32_t>(std::nearbyint(scaled));
}

ColorRgba quantize(const ColorRgba& c, int bit_depth) {
    const double q = max_code(bit_depth);
    return {quantize_channel(c.r, bit_depth) / q, quantize_channel(c.g, bit_depth) / q,
            quantize_channel(c.b, bit_depth) / q, quantize_channel(c.a, bit_depth) / q};
}

ImageError::ImageError(Kind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

namespace {

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// --- PNG ------------------------------------------------------------------
//
// libpng reports errors through longjmp. Functions that call setjmp keep only
// trivially destructible locals alive across the jump; all containers are
// sized by the caller beforehand.

struct PngErrorSink {
    std::jmp_buf jump;
    char message[256];
};

void png_error_handler(png_structp png, png_const_charp msg) {
    auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
    std::snprintf(sink->message, sizeof sink->message, "%s", msg);
    std::longjmp(sink->jump, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct MemoryReader {
    const unsigned char* data;
    std::size_t size;
    std::size_t offset;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t length) {
    auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (reader->size - reader->offset < length) {
        png_error(png, "truncated PNG data");
    }
    std::memcpy(out, reader->data + reader->offset, length);
    reader->offset += length;
}

struct PngHeader {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int depth = 8;  // after transforms: 8 or 16
};

[[noreturn]] void throw_png_failure(const PngErrorSink& sink) {
    const bool truncated = std::strstr(sink.message, "truncated") != nullptr ||
                           std::strstr(sink.message, "Not enough") != nullptr ||
                           std::strstr(sink.message, "Read Error") != nullptr;
    throw ImageError(truncated ? ImageError::Kind::Truncated : ImageError::Kind::Corrupt,
                     std::string("PNG decode failed: ") + sink.message);
}

bool png_read_header(png_structp png, png_infop info, PngErrorSink* sink, PngHeader* header) {
    if (setjmp(sink->jump)) {
        return false;
    }
    png_read_info(png, info);
    const png_byte color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        if (depth < 8) {
            png_set_expand_gray_1_2_4_to_8(png);
        }
        png_set_gray_to_rgb(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    if ((color & PNG_COLOR_MASK_ALPHA) == 0 && !png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_add_alpha(png, depth == 16 ? 0xffff : 0xff, PNG_FILLER_AFTER);
    }
    png_read_update_info(png, info);
    header->width = png_get_image_width(png, info);
    header->height = png_get_image_height(png, info);
    header->depth = png_get_bit_depth(png, info) == 16 ? 16 : 8;
    return true;
}

bool png_read_body(png_structp png, png_infop info, PngErrorSink* sink, png_bytep* rows) {
    if (setjmp(sink->jump)) {
        return false;
    }
    png_read_image(png, rows);
    png_read_end(png, info);
    return true;
}

RasterImage decode_png(std::span<const unsigned char> bytes) {
    PngErrorSink sink{};
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_handler,
                                             png_warning_handler);
    if (png == nullptr) {
        throw ImageError(ImageError::Kind::Io, "libpng initialisation failed");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw ImageError(ImageError::Kind::Io, "libpng initialisation failed");
    }
    struct Guard {
        png_structp* png;
        png_infop* info;
        ~Guard() { png_destroy_read_struct(png, info, nullptr); }
    } guard{&png, &info};

    MemoryReader reader{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &reader, png_read_memory);

    PngHeader header;
    if (!png_read_header(png, info, &sink, &header)) {
        throw_png_failure(sink);
    }
    const std::size_t channels = 4;
    const std::size_t sample_bytes = header.depth == 16 ? 2 : 1;
    const std::size_t stride = header.width * channels * sample_bytes;
    if (png_get_rowbytes(png, info) != stride) {
        throw ImageError(ImageError::Kind::Corrupt, "unexpected PNG row layout");
    }
    std::vector<unsigned char> buffer(stride * header.height);
    std::vector<png_bytep> rows(header.height);
    for (std::size_t y = 0; y < header.height; ++y) {
        rows[y] = buffer.data() + y * stride;
    }
    if (!png_read_body(png, info, &sink, rows.data())) {
        throw_png_failure(sink);
    }

    RasterImage img(header.width, header.height, header.depth);
    const double q = max_code(header.depth);
    auto sample = [&](std::size_t index) -> double {
        if (sample_bytes == 2) {
            return ((buffer[2 * index] << 8) | buffer[2 * index + 1]) / q;
        }
        return buffer[index] / q;
    };
    auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        pixels[i] = {sample(4 * i), sample(4 * i + 1), sample(4 * i + 2), sample(4 * i + 3)};
    }

    png_textp text = nullptr;
    int text_count = 0;
    png_get_text(png, info, &text, &text_count);
    for (int i = 0; i < text_count; ++i) {
        img.metadata[text[i].key] = std::string(text[i].text, text[i].text_length);
    }
    return img;
}

void png_write_memory(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

bool png_write_all(png_structp png, png_infop info, PngErrorSink* sink, png_bytep* rows,
                   png_textp text, int text_count, png_uint_32 width, png_uint_32 height,
                   int depth) {
    if (setjmp(sink->jump)) {
        return false;
    }
    png_set_IHDR(png, info, width, height, depth, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (text_count > 0) {
        png_set_text(png, info, text, text_count);
    }
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, info);
    return true;
}

std::vector<unsigned char> encode_png(const RasterImage& img) {
    const int depth = img.bit_depth();
    const std::size_t sample_bytes = depth == 16 ? 2 : 1;
    const std::size_t stride = img.width() * 4 * sample_bytes;
    std::vector<unsigned char> buffer(stride * img.height());
    std::size_t at = 0;
    for (const ColorRgba& px : img.pixels()) {
        for (double v : {px.r, px.g, px.b, px.a}) {
            const std::uint32_t code = quantize_channel(v, depth);
            if (sample_bytes == 2) {
                buffer[at++] = static_cast<unsigned char>(code >> 8);
            }
            buffer[at++] = static_cast<unsigned char>(code & 0xff);
        }
    }
    std::vector<png_bytep> rows(img.height());
    for (std::size_t y = 0; y < img.height(); ++y) {
        rows[y] = buffer.data() + y * stride;
    }

    // png_text points into the metadata strings, which outlive the write.
    std::vector<png_text> text;
    text.reserve(img.metadata.size());
    for (const auto& [key, value] : img.metadata) {
        if (key.empty() || key.size() > 79) {
            throw ValidationError("PNG text keys must be 1-79 characters: '" + key + "'");
        }
        png_text entry{};
        entry.compression = PNG_TEXT_COMPRESSION_NONE;
        entry.key = const_cast<char*>(key.c_str());
        entry.text = const_cast<char*>(value.c_str());
        entry.text_length = value.size();
        text.push_back(entry);
    }

    std::vector<unsigned char> out;
    PngErrorSink sink{};
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_handler,
                                              png_warning_handler);
    if (png == nullptr) {
        throw ImageError(ImageError::Kind::Io, "libpng initialisation failed");
    }
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* png;
        png_infop* info;
        ~Guard() { png_destroy_write_struct(png, info); }
    } guard{&png, &info};
    if (info == nullptr) {
        throw ImageError(ImageError::Kind::Io, "libpng initialisation failed");
    }
    png_set_write_fn(png, &out, png_write_memory, png_flush_noop);
    if (!png_write_all(png, info, &sink, rows.data(), text.data(), static_cast<int>(text.size()),
                       static_cast<png_uint_32>(img.width()),
                       static_cast<png_uint_32>(img.height()), depth)) {
        throw ImageError(ImageError::Kind::Io, std::string("PNG encode failed: ") + sink.message);
    }
    return out;
}

// --- PPM (binary P6) -------------------------------------------------------

class PpmCursor {
public:
    explicit PpmCursor(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long read_number(const char* what) {
        skip_space_and_comments();
        if (pos_ == bytes_.size()) {
            throw ImageError(ImageError::Kind::Truncated, std::string("PPM header ends before ") + what);
        }
        if (!std::isdigit(bytes_[pos_])) {
            throw ImageError(ImageError::Kind::Corrupt, std::string("PPM header has a bad ") + what);
        }
        unsigned long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000UL) {
                throw ImageError(ImageError::Kind::Corrupt, std::string("PPM ") + what + " too large");
            }
            ++pos_;
        }
        return v;
    }

    void expect_single_space() {
        if (pos_ == bytes_.size()) {
            throw ImageError(ImageError::Kind::Truncated, "PPM header ends before pixel data");
        }
        if (!std::isspace(bytes_[pos_])) {
            throw ImageError(ImageError::Kind::Corrupt, "PPM header is malformed");
        }
        ++pos_;
    }

    std::size_t position() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 2;  // past "P6"
};

RasterImage decode_ppm(std::span<const unsigned char> bytes) {
    PpmCursor cursor(bytes);
    const unsigned long width = cursor.read_number("width");
    const unsigned long height = cursor.read_number("height");
    const unsigned long maxval = cursor.read_number("maxval");
    cursor.expect_single_space();
    if (width == 0 || height == 0) {
        throw ImageError(ImageError::Kind::Corrupt, "PPM dimensions must be positive");
    }
    if (maxval == 0 || maxval > 65535) {
        throw ImageError(ImageError::Kind::Corrupt, "PPM maxval must be in 1..65535");
    }
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    const std::size_t need = width * height * 3 * sample_bytes;
    const std::size_t have = bytes.size() - cursor.position();
    if (have < need) {
        throw ImageError(ImageError::Kind::Truncated, "PPM pixel data is truncated");
    }
    RasterImage img(width, height, sample_bytes == 2 ? 16 : 8);
    const unsigned char* data = bytes.data() + cursor.position();
    const double q = static_cast<double>(maxval);
    auto sample = [&](std::size_t index) -> double {
        if (sample_bytes == 2) {
            return ((data[2 * index] << 8) | data[2 * index + 1]) / q;
        }
        return data[index] / q;
    };
    auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        pixels[i] = {sample(3 * i), sample(3 * i + 1), sample(3 * i + 2), 1.0};
    }
    return img;
}

std::vector<unsigned char> encode_ppm(const RasterImage& img) {
    const int depth = img.bit_depth();
    const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n" +
                               std::to_string(static_cast<int>(max_code(depth))) + "\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(out.size() + img.pixel_count() * 3 * (depth == 16 ? 2 : 1));
    for (const ColorRgba& px : img.pixels()) {
        if (quantize_channel(px.a, depth) != quantize_channel(1.0, depth)) {
            throw ImageError(ImageError::Kind::UnsupportedFormat,
                             "PPM cannot store transparency; save as PNG instead");
        }
        for (double v : {px.r, px.g, px.b}) {
            const std::uint32_t code = quantize_channel(v, depth);
            if (depth == 16) {
                out.push_back(static_cast<unsigned char>(code >> 8));
            }
            out.push_back(static_cast<unsigned char>(code & 0xff));
        }
    }
    return out;
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

}  // namespace

RasterImage decode_image(std::span<const unsigned char> bytes) {
    if (bytes.empty()) {
        throw ImageError(ImageError::Kind::Truncated, "image data is empty");
    }
    const std::size_t sig = std::min<std::size_t>(bytes.size(), sizeof kPngSignature);
    if (std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(sig), kPngSignature)) {
        if (bytes.size() < sizeof kPngSignature) {
            throw ImageError(ImageError::Kind::Truncated, "PNG signature is truncated");
        }
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
        return decode_ppm(bytes);
    }
    throw ImageError(ImageError::Kind::UnsupportedFormat,
                     "unsupported image format (expected PNG or binary PPM)");
}

RasterImage load_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw ImageError(ImageError::Kind::NotFound, "no such image file: " + path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageError(ImageError::Kind::Io, "cannot open " + path.string());
    }
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                           std::istreambuf_iterator<char>());
    try {
        return decode_image(bytes);
    } catch (const ImageError& e) {
        throw ImageError(e.kind(), path.string() + ": " + e.what());
    }
}

std::vector<unsigned char> encode_image(const RasterImage& img, ImageFormat format) {
    return format == ImageFormat::Png ? encode_png(img) : encode_ppm(img);
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    ImageFormat format;
    if (ext == ".png") {
        format = ImageFormat::Png;
    } else if (ext == ".ppm") {
        format = ImageFormat::Ppm;
    } else {
        throw ImageError(ImageError::Kind::UnsupportedFormat,
                         "cannot infer image format from '" + path.string() + "' (use .png or .ppm)");
    }
    const std::vector<unsigned char> bytes = encode_image(img, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ImageError(ImageError::Kind::Io, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ImageError(ImageError::Kind::Io, "write failed for " + path.string());
    }
}

}  // namespace sightglow
