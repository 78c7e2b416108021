#include <omp.h>

#include <algorithm>
#include <stdexcept>

#include "sightglow/image.hpp"
#include "sightglow/pipeline.hpp"

namespace sightglow::kernels {

void transform_parallel(const PixelPipeline& pipeline, std::span<const ColorRgba> in,
                        std::span<ColorRgba> out, int bit_depth, int workers) {
    if (in.size() != out.size()) {
        throw std::invalid_argument("input and output spans differ in size");
    }
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const auto chunks = static_cast<std::ptrdiff_t>((in.size() + kChunkPixels - 1) / kChunkPixels);

    // Chunk boundaries depend only on the pixel count; each pixel is written
    // by exactly one iteration, so results do not depend on the thread count.
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t chunk = 0; chunk < chunks; ++chunk) {
        const std::size_t begin = static_cast<std::size_t>(chunk) * kChunkPixels;
        const std::size_t end = std::min(begin + kChunkPixels, in.size());
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = quantize(pipeline(in[i]), bit_depth);
        }
    }
}

}  // namespace sightglow::kernels
