#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sightglow/cvd_engine.hpp"
#include "sightglow/filter_forge.hpp"
#include "sightglow/image.hpp"
#include "sightglow/pipeline.hpp"

namespace sightglow {

struct TransformOptions {
    int workers = 0;  // <= 0: OpenMP default
};

/// Applies the pipeline to every pixel and quantizes to the source bit depth.
/// Metadata is carried over.
RasterImage transform_image(const RasterImage& img, const PixelPipeline& pipeline,
                            const TransformOptions& options = {});
RasterImage transform_image(const RasterImage& img, const VisionProfile& profile,
                            const TransformOptions& options = {});
RasterImage transform_image(const RasterImage& img, const ColorMatrix& m,
                            const TransformOptions& options = {});

enum class Layout { Vertical, Horizontal };

struct Panel {
    std::string label;
    PixelPipeline transform;
};

struct ComparisonGrid {
    std::vector<Panel> panels;
    Layout layout = Layout::Vertical;
};

inline constexpr std::size_t kDividerPixels = 4;

/// Panels stacked along the layout axis with a black divider between them.
/// Labels go to metadata keys "panel.0", "panel.1", ...
RasterImage render_comparison(const RasterImage& img, const ComparisonGrid& grid,
                              const TransformOptions& options = {});

inline constexpr std::size_t kMaxSeparabilityPairs = 4096;
inline constexpr std::uint64_t kSeparabilitySeed = 6121;

/// Samples up to kMaxSeparabilityPairs random pixel pairs with distinct colours
/// and reports their simulated separability. Throws ValidationError for
/// single-colour images.
SeparabilityReport image_separability(const RasterImage& img, CvdType t, const Daltonizer& d,
                                      std::uint64_t seed = kSeparabilitySeed);

/// Dot-field test chart: a ring figure in one colour on a ground of another,
/// both drawn as packed dots over a light background.
struct ChartColors {
    ColorRgba figure{0.50, 0.55, 0.25, 1.0};
    ColorRgba ground{0.80, 0.35, 0.25, 1.0};
    ColorRgba background{0.80, 0.35, 0.25, 1.0};
};

RasterImage synthetic_chart(std::size_t width, std::size_t height, std::uint64_t seed = 1,
                            const ChartColors& colors = {});

/// Frames named frame_%06d.png in `dir`, sorted by name.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);
std::string frame_name(std::size_t index);

/// Transforms each frame into out_dir under the same name. Returns the count.
std::size_t transform_frames(const std::filesystem::path& in_dir,
                             const std::filesystem::path& out_dir, const PixelPipeline& pipeline,
                             const TransformOptions& options = {});

}  // namespace sightglow
