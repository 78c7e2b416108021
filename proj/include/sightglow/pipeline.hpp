#pragma once

#include <span>
#include <variant>
#include <vector>

#include "sightglow/color_core.hpp"
#include "sightglow/cvd_engine.hpp"
#include "sightglow/filter_forge.hpp"

namespace sightglow {

/// Per-pixel transform built from one or more stages, applied in order.
/// Each stage clamps its output.
class PixelPipeline {
public:
    struct Linear {  // decode, 3x3 linear-RGB transform, encode
        Matrix3 matrix;
    };
    struct Redistribute {
        CvdType type;
        double strength;
    };
    using Stage = std::variant<ColorMatrix, Linear, Redistribute>;

    /// Identity.
    PixelPipeline() = default;

    static PixelPipeline matrix(const ColorMatrix& m);
    static PixelPipeline simulation(CvdType t, Severity s);
    static PixelPipeline daltonizer(const Daltonizer& d);
    /// Fused matrix when possible; redistribute followed by the slider matrix otherwise.
    static PixelPipeline profile(const VisionProfile& p);

    PixelPipeline& then(Stage stage);

    const std::vector<Stage>& stages() const { return stages_; }

    ColorRgba operator()(const ColorRgba& c) const;

private:
    std::vector<Stage> stages_;
};

namespace kernels {

/// Reference implementation: plain loop, then quantize to `bit_depth`.
void transform_serial(const PixelPipeline& pipeline, std::span<const ColorRgba> in,
                      std::span<ColorRgba> out, int bit_depth);

/// OpenMP version over fixed-size chunks. workers <= 0 selects the OpenMP
/// default. Output is identical to transform_serial for any worker count.
void transform_parallel(const PixelPipeline& pipeline, std::span<const ColorRgba> in,
                        std::span<ColorRgba> out, int bit_depth, int workers);

inline constexpr std::size_t kChunkPixels = 4096;

}  // namespace kernels

}  // namespace sightglow
