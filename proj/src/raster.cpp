#include "sightglow/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>
#include <set>

#include "sightglow/random.hpp"

namespace sightglow {

namespace {

bool same_rgb(const ColorRgba& a, const ColorRgba& b) {
    return a.r == b.r && a.g == b.g && a.b == b.b;
}

}  // namespace

RasterImage transform_image(const RasterImage& img, const PixelPipeline& pipeline,
                            const TransformOptions& options) {
    RasterImage out(img.width(), img.height(), img.bit_depth());
    out.metadata = img.metadata;
    kernels::transform_parallel(pipeline, img.pixels(), out.pixels(), img.bit_depth(),
                                options.workers);
    return out;
}

RasterImage transform_image(const RasterImage& img, const VisionProfile& profile,
                            const TransformOptions& options) {
    return transform_image(img, PixelPipeline::profile(profile), options);
}

RasterImage transform_image(const RasterImage& img, const ColorMatrix& m,
                            const TransformOptions& options) {
    return transform_image(img, PixelPipeline::matrix(m), options);
}

RasterImage render_comparison(const RasterImage& img, const ComparisonGrid& grid,
                              const TransformOptions& options) {
    if (grid.panels.size() < 2) {
        throw ValidationError("a comparison grid needs at least two panels");
    }
    std::set<std::string> labels;
    for (const Panel& panel : grid.panels) {
        if (!labels.insert(panel.label).second) {
            throw ValidationError("duplicate panel label '" + panel.label + "'");
        }
    }

    const std::size_t n = grid.panels.size();
    const bool vertical = grid.layout == Layout::Vertical;
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const std::size_t out_w = vertical ? w : n * w + (n - 1) * kDividerPixels;
    const std::size_t out_h = vertical ? n * h + (n - 1) * kDividerPixels : h;

    RasterImage out(out_w, out_h, img.bit_depth(), ColorRgba{0.0, 0.0, 0.0, 1.0});
    out.metadata = img.metadata;
    out.metadata["layout"] = vertical ? "vertical" : "horizontal";
    for (std::size_t p = 0; p < n; ++p) {
        const RasterImage panel = transform_image(img, grid.panels[p].transform, options);
        const std::size_t ox = vertical ? 0 : p * (w + kDividerPixels);
        const std::size_t oy = vertical ? p * (h + kDividerPixels) : 0;
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                out.at(ox + x, oy + y) = panel.at(x, y);
            }
        }
        out.metadata["panel." + std::to_string(p)] = grid.panels[p].label;
    }
    return out;
}

SeparabilityReport image_separability(const RasterImage& img, CvdType t, const Daltonizer& d,
                                      std::uint64_t seed) {
    const auto pixels = img.pixels();
    const bool monochrome = std::all_of(pixels.begin(), pixels.end(),
                                        [&](const ColorRgba& c) { return same_rgb(c, pixels[0]); });
    if (monochrome) {
        throw ValidationError("separability needs an image with at least two distinct colours");
    }
    SeededRng rng(seed);
    std::vector<ColorPair> pairs;
    pairs.reserve(kMaxSeparabilityPairs);
    for (std::size_t draw = 0; draw < kMaxSeparabilityPairs; ++draw) {
        const ColorRgba& a = pixels[rng.below(pixels.size())];
        const ColorRgba& b = pixels[rng.below(pixels.size())];
        if (!same_rgb(a, b)) {
            pairs.emplace_back(a, b);
        }
    }
    if (pairs.empty()) {
        // Nearly uniform image: fall back to the first differing pixel.
        const auto other = std::find_if(pixels.begin(), pixels.end(),
                                        [&](const ColorRgba& c) { return !same_rgb(c, pixels[0]); });
        pairs.emplace_back(pixels[0], *other);
    }
    return separability_report(t, pairs, d);
}

RasterImage synthetic_chart(std::size_t width, std::size_t height, std::uint64_t seed,
                            const ChartColors& colors) {
    RasterImage img(width, height, 8, quantize(colors.background, 8));
    const ColorRgba figure = quantize(colors.figure, 8);
    const ColorRgba ground = quantize(colors.ground, 8);

    const double size = static_cast<double>(std::min(width, height));
    const double cx = 0.5 * static_cast<double>(width);
    const double cy = 0.5 * static_cast<double>(height);
    const double ring_inner = 0.18 * size;
    const double ring_outer = 0.34 * size;
    const double r_min = std::max(1.0, 0.015 * size);
    const double r_max = std::max(1.5, 0.04 * size);
    const double field = 0.48 * size;

    struct Dot {
        double x, y, r;
    };
    std::vector<Dot> dots;
    // Bucket grid with cells wider than any dot pair's reach, so overlap
    // checks only visit the 3x3 neighbourhood.
    const double cell = 2.0 * r_max + 1.0;
    const auto gw = static_cast<std::size_t>(std::ceil(static_cast<double>(width) / cell));
    const auto gh = static_cast<std::size_t>(std::ceil(static_cast<double>(height) / cell));
    std::vector<std::vector<std::size_t>> buckets(gw * gh);

    SeededRng rng(seed);
    const double expected_dots = (field * field) / (r_min * r_min);
    const auto attempts = static_cast<std::size_t>(20.0 * expected_dots) + 100;
    for (std::size_t i = 0; i < attempts; ++i) {
        const Dot d{rng.uniform(0.0, static_cast<double>(width)),
                    rng.uniform(0.0, static_cast<double>(height)), rng.uniform(r_min, r_max)};
        if (std::hypot(d.x - cx, d.y - cy) + d.r > field) {
            continue;
        }
        const auto bx = static_cast<std::size_t>(d.x / cell);
        const auto by = static_cast<std::size_t>(d.y / cell);
        bool overlaps = false;
        for (std::size_t ny = by == 0 ? 0 : by - 1; ny <= std::min(gh - 1, by + 1) && !overlaps; ++ny) {
            for (std::size_t nx = bx == 0 ? 0 : bx - 1; nx <= std::min(gw - 1, bx + 1) && !overlaps; ++nx) {
                for (std::size_t idx : buckets[ny * gw + nx]) {
                    const Dot& o = dots[idx];
                    if (std::hypot(d.x - o.x, d.y - o.y) < d.r + o.r + 1.0) {
                        overlaps = true;
                        break;
                    }
                }
            }
        }
        if (!overlaps) {
            buckets[by * gw + bx].push_back(dots.size());
            dots.push_back(d);
        }
    }

    for (const Dot& d : dots) {
        const double dist = std::hypot(d.x - cx, d.y - cy);
        const ColorRgba& c = dist >= ring_inner && dist <= ring_outer ? figure : ground;
        const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor(d.x - d.r)));
        const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor(d.y - d.r)));
        const auto x1 = std::min(width, static_cast<std::size_t>(std::ceil(d.x + d.r)) + 1);
        const auto y1 = std::min(height, static_cast<std::size_t>(std::ceil(d.y + d.r)) + 1);
        for (std::size_t y = y0; y < y1; ++y) {
            for (std::size_t x = x0; x < x1; ++x) {
                if (std::hypot(x + 0.5 - d.x, y + 0.5 - d.y) <= d.r) {
                    img.at(x, y) = c;
                }
            }
        }
    }
    return img;
}

std::string frame_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu.png", index);
    return buf;
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
    static const std::regex pattern("frame_[0-9]{6}\\.png");
    if (!std::filesystem::is_directory(dir)) {
        throw ImageError(ImageError::Kind::NotFound, "no such frame directory: " + dir.string());
    }
    std::vector<std::filesystem::path> frames;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), pattern)) {
            frames.push_back(entry.path());
        }
    }
    std::sort(frames.begin(), frames.end());
    return frames;
}

std::size_t transform_frames(const std::filesystem::path& in_dir,
                             const std::filesystem::path& out_dir, const PixelPipeline& pipeline,
                             const TransformOptions& options) {
    const auto frames = list_frames(in_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw ImageError(ImageError::Kind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
    }
    for (const auto& frame : frames) {
        save_image(transform_image(load_image(frame), pipeline, options), out_dir / frame.filename());
    }
    return frames.size();
}

}  // namespace sightglow
