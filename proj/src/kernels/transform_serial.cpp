#include <stdexcept>

#include "sightglow/image.hpp"
#include "sightglow/pipeline.hpp"

namespace sightglow::kernels {

void transform_serial(const PixelPipeline& pipeline, std::span<const ColorRgba> in,
                      std::span<ColorRgba> out, int bit_depth) {
    if (in.size() != out.size()) {
        throw std::invalid_argument("input and output spans differ in size");
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = quantize(pipeline(in[i]), bit_depth);
    }
}

}  // namespace sightglow::kernels
