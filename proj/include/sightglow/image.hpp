#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sightglow/color_core.hpp"

namespace sightglow {

/// Row-major RGBA raster. Channels are stored as doubles holding exact
/// n / (2^depth - 1) values once the image has been quantized.
class RasterImage {
public:
    RasterImage(std::size_t width, std::size_t height, int bit_depth = 8,
                ColorRgba fill = {0.0, 0.0, 0.0, 1.0});

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t pixel_count() const { return pixels_.size(); }
    int bit_depth() const { return bit_depth_; }
    void set_bit_depth(int bit_depth);

    ColorRgba& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
    const ColorRgba& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

    std::span<ColorRgba> pixels() { return pixels_; }
    std::span<const ColorRgba> pixels() const { return pixels_; }

    /// Key/value text stored alongside the pixels (PNG tEXt chunks).
    std::map<std::string, std::string> metadata;

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    int bit_depth_;
    std::vector<ColorRgba> pixels_;
};

/// Largest code value at a bit depth (255 or 65535).
double max_code(int bit_depth);

/// Clamp, scale by the max code, round half to even.
std::uint32_t quantize_channel(double v, int bit_depth);
ColorRgba quantize(const ColorRgba& c, int bit_depth);

class ImageError : public std::runtime_error {
public:
    enum class Kind { NotFound, UnsupportedFormat, Truncated, Corrupt, Io };

    ImageError(Kind kind, const std::string& message);

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class ImageFormat { Png, Ppm };

/// Format sniffed from file contents: PNG signature or a "P6" header.
RasterImage load_image(const std::filesystem::path& path);
RasterImage decode_image(std::span<const unsigned char> bytes);

/// Format chosen from the extension (.png or .ppm). PNG is written as RGBA
/// at the image's bit depth. PPM cannot carry alpha or metadata, so an image
/// with any non-opaque pixel is rejected.
void save_image(const RasterImage& img, const std::filesystem::path& path);
std::vector<unsigned char> encode_image(const RasterImage& img, ImageFormat format);

}  // namespace sightglow
